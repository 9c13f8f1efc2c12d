#![no_main]

use libfuzzer_sys::fuzz_target;
use rotkit::tree::{parse_tree, render_tree, BinaryTree};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(tree) = parse_tree(text) {
        assert_eq!(parse_tree(&render_tree(&tree)).as_ref(), Ok(&tree));
        assert_eq!(BinaryTree::from_triangulation(&tree.to_triangulation()), tree);
    }
});

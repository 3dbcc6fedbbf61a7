//! Writing and reading the JSON file formats used by the command line.
//!
//! ```text
//! cargo run --example files -- /tmp/slicerank-demo
//! cargo run -- rank /tmp/slicerank-demo/identity.json --kind slice
//! ```

use std::path::PathBuf;

use slicerank::format::{read_document, write_json_atomic, DecompositionFile, Document, TensorFile};
use slicerank::linalg::Field;
use slicerank::tensor::Tensor;
use slicerank::transforms::slice_by_axis;

fn main() -> slicerank::error::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;

    let t = Tensor::identity(Field::of(2), 3, 2);
    let tensor_path = dir.join("identity.json");
    write_json_atomic(&tensor_path, &TensorFile::from_tensor(&t))?;
    let dec_path = dir.join("identity_sliced.json");
    write_json_atomic(&dec_path, &DecompositionFile::from_slice(&slice_by_axis(&t, 0)?))?;

    for path in [&tensor_path, &dec_path] {
        match read_document(path)? {
            Document::Tensor(file) => println!("{}: tensor with dims {:?}", path.display(), file.to_tensor()?.dims()),
            Document::Decomposition(file) => {
                println!("{}: decomposition of length {}", path.display(), file.to_decomposition()?.len())
            }
            _ => println!("{}: other", path.display()),
        }
    }
    Ok(())
}

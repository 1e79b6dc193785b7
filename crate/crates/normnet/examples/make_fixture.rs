//! Regenerates the bundled fixture corpus: `cargo run --example make_fixture -- <dir>`.

use std::path::PathBuf;

use normnet::corpus_io::write_corpus;
use normnet::tsv::{write_file, Writer};
use normnet_core::synthetic::fixture_corpus;

const CLASSES: [&str; 3] = ["user-content", "user-user", "user-admin"];
const CONFUSION: [[usize; 3]; 3] = [[17, 2, 1], [2, 9, 2], [1, 2, 4]];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures".into())
        .into();
    write_corpus(&fixture_corpus(), &dir.join("corpus30"))?;
    let mut w = Writer::new(&["item", "rater_a", "rater_b"]);
    let mut item = 0;
    for (a, row) in CONFUSION.iter().enumerate() {
        for (b, &n) in row.iter().enumerate() {
            for _ in 0..n {
                item += 1;
                w.row([
                    item.to_string(),
                    CLASSES[a].to_string(),
                    CLASSES[b].to_string(),
                ]);
            }
        }
    }
    write_file(&dir.join("kappa_labels.tsv"), &w.finish())?;
    Ok(())
}

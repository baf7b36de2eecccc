//! Regenerates `demo/survey.csv`, the bundled synthetic 519 x 20 dataset.
//!
//! cargo run -p clustergrid-cli --example make_demo_data -- crates/cli/demo/survey.csv

use std::io::Write;

use clustergrid_core::synthetic::survey_like;

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "crates/cli/demo/survey.csv".into());
    let (data, _) = survey_like(519, 20, 9, 2022);
    let mut out = std::io::BufWriter::new(std::fs::File::create(&path)?);
    writeln!(out, "{}", data.columns().join(","))?;
    for row in data.values().iter_rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.2}")).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()?;
    eprintln!("wrote {path}");
    Ok(())
}

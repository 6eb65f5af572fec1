//! The whole chain in one call, with artifacts written to a directory.

use chirex::pipeline::{pipeline, PipelineParams};
use chirex::toroidal::{Family, TorusParams};

fn main() -> chirex::Result<()> {
    let params = PipelineParams {
        torus: TorusParams::new(Family::F44, 3, 1)?,
        db_s: 2,
        mix_s: Some(3),
        seed: None,
    };
    let out = pipeline(&params)?;
    for r in &out.reports {
        println!(
            "{:<16} passed {}  {:.1} ms",
            r.construction, r.passed, r.elapsed_ms
        );
    }
    let dir = std::env::temp_dir().join("chirex-pipeline");
    out.write_to(&dir)?;
    println!("artifacts in {}", dir.display());
    Ok(())
}

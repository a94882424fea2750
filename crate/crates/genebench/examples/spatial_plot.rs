//! Render a spatial expression plot — the input image for the marker-gene
//! task — and assemble the corresponding instruction sample.
//!
//! ```bash
//! cargo run -p genebench --example spatial_plot
//! ```

use genebench::corpus::{build_mllm_sample, render_spatial_plot, PlotStyle, Task};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A small synthetic tissue section: a CD4-high patch in one corner.
    let mut coords = Vec::new();
    let mut expression = Vec::new();
    for i in 0..20 {
        for j in 0..20 {
            let (x, y) = (i as f64 / 19.0, j as f64 / 19.0);
            coords.push((x, y));
            let d = ((x - 0.8).powi(2) + (y - 0.8).powi(2)).sqrt();
            expression.push((1.0 - d * 1.8).max(0.0));
        }
    }

    let out = std::env::temp_dir().join("genebench-cd4-spatial.png");
    let style = PlotStyle::default();
    let centers = render_spatial_plot(&coords, &expression, "CD4", &style, &out)?;
    println!("rendered {} cells to {}", centers.len(), out.display());

    let sample = build_mllm_sample(
        out.to_str().unwrap(),
        "Based on the spatial expression plot, is CD4 a marker gene of CD4 T cells? Answer yes or no with one sentence of justification.",
        "Yes, CD4 is a marker gene of CD4 T cells.",
        Task::MarkerGene,
        "CD4",
    )?;
    println!("assembled marker-task sample for gene {}:", sample.gene);
    println!("  instruction: {}", sample.instruction);
    println!("  image:       {}", sample.image_ref.as_deref().unwrap());
    println!("  answer:      {}", sample.output);
    Ok(())
}

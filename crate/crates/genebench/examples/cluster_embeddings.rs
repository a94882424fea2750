//! Embedding-quality analysis on the shipped demo matrix: k-NN graph,
//! Leiden communities, NMI against the functional labels, and gene-set
//! enrichment per cluster.
//!
//! ```bash
//! cargo run -p genebench --example cluster_embeddings
//! ```

use genebench::embed_eval::{
    enrich_clusters, knn_graph, leiden, modularity, nmi, top_pathways, EmbeddingMatrix,
    GeneSetCollection, LabelVector, Metric,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let matrix = EmbeddingMatrix::read_text(std::path::Path::new(&format!(
        "{fixtures}/embeddings_demo.txt"
    )))?;
    let label_table = LabelVector::parse_table(&std::fs::read_to_string(format!(
        "{fixtures}/labels_demo.tsv"
    ))?)?;
    let labels = LabelVector::for_matrix(&matrix, &label_table)?;

    let graph = knn_graph(&matrix, 3, Metric::Cosine)?;
    println!(
        "k-NN graph: {} nodes, {} edges, total weight {:.3}",
        graph.node_count(),
        graph.edge_count(),
        graph.total_weight()
    );

    let partition = leiden(&graph, 1.0, 7, 100);
    println!(
        "leiden: {} communities, modularity {:.4}",
        partition.community_count(),
        modularity(&graph, &partition, 1.0)
    );
    for (id, members) in partition.communities().into_iter().enumerate() {
        let names: Vec<&str> = members.iter().map(|&i| matrix.row_ids()[i].as_str()).collect();
        println!("  community {id}: {names:?}");
    }

    let score = nmi(partition.assignment(), &labels.to_indices())?;
    println!("NMI vs functional labels: {score:.4}");

    let collection = GeneSetCollection::from_file(std::path::Path::new(&format!(
        "{fixtures}/gene_sets_demo.tsv"
    )))?;
    for (id, members) in partition.communities().into_iter().enumerate() {
        let cluster: std::collections::BTreeSet<String> = members
            .iter()
            .map(|&i| matrix.row_ids()[i].clone())
            .collect();
        let rows = enrich_clusters(&cluster, &collection)?;
        let ranked: Vec<(String, f64)> = rows.iter().map(|r| (r.pathway.clone(), r.adjusted_p)).collect();
        let top = top_pathways(&ranked, 2);
        println!("cluster {id} top pathways:");
        for (pathway, p) in top {
            println!("  {pathway:<20} bonferroni p = {p:.4e}");
        }
    }
    Ok(())
}

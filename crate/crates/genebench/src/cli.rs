//! The `genebench` command-line interface.
//!
//! Subcommands: `build-corpus`, `split`, `infer`, `grade`, `metrics`,
//! `postprocess`, `embed-eval`, `report`. Exit codes: 0 success, 1 config
//! error, 2 data error, 3 provider error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::corpus::{
    self, build_real_sample, build_synthetic_sample, fetch_gene_record, merge_corpora, split_eval,
    Biotype, CachingCatalog, CorpusManifest, CorpusTemplates, FileCatalog, GeneCatalog,
    HttpCatalog, HttpProvider, InstructionSample, PromptTemplate, Provider, ProviderSpec,
};
use crate::embed_eval::{
    enrich_clusters, knn_graph, leiden, modularity, nmi, top_pathways, EmbeddingMatrix,
    GeneSetCollection, LabelVector, Metric,
};
use crate::grading::Gold;
use crate::harness::{
    config::{parse_override, RunConfig},
    eval_io::{read_eval_samples, read_outputs, write_outputs},
    grade_run::{run_grading, write_details, write_rubric_worksheet},
    infer::run_inference,
    report::{emit_report, read_benchmark_table},
    HarnessError,
};
use crate::postprocess::{repair_output, GeneIdDatabase, RepairOptions};
use crate::text_metrics::{bleu, rouge_k_recall, tokenize};

#[derive(Parser)]
#[command(
    name = "genebench",
    about = "Build gene instruction corpora, grade model outputs, repair them, and analyse description embeddings",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an instruction corpus from a gene catalog
    BuildCorpus(BuildCorpusArgs),
    /// Split a corpus into gene-disjoint train and eval manifests
    Split(SplitArgs),
    /// Run deterministic inference over eval samples against a provider
    Infer(InferArgs),
    /// Grade model outputs against eval samples
    Grade(GradeArgs),
    /// Compute per-sample BLEU / ROUGE-1 columns for gene-description outputs
    Metrics(MetricsArgs),
    /// Repair gene IDs and alias clauses in model outputs
    Postprocess(PostprocessArgs),
    /// Cluster embeddings, score them against labels, and run enrichment
    EmbedEval(EmbedEvalArgs),
    /// Merge benchmark rows into a report with correlation summary
    Report(ReportArgs),
}

#[derive(Args)]
struct BuildCorpusArgs {
    /// Directory of per-gene JSON records (fixture catalog)
    #[arg(long, conflicts_with = "catalog_url")]
    catalog_dir: Option<PathBuf>,
    /// Base URL of an esearch/esummary-style catalog service
    #[arg(long)]
    catalog_url: Option<String>,
    #[arg(long, default_value = "v1")]
    catalog_version: String,
    /// File with one gene symbol per line
    #[arg(long)]
    genes: PathBuf,
    /// Cache fetched records under this directory
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    corpus_out: PathBuf,
    #[arg(long)]
    manifest_out: PathBuf,
    /// Also generate synthetic samples (protein-coding genes only; requires a provider)
    #[arg(long)]
    synthetic: bool,
    /// Rephrase catalog summaries through the provider
    #[arg(long)]
    rephrase: bool,
    #[arg(long)]
    provider_endpoint: Option<String>,
    #[arg(long, default_value = "default")]
    provider_model: String,
    /// Catalog requests per second
    #[arg(long, default_value_t = corpus::catalog::DEFAULT_RATE_LIMIT)]
    rate_limit: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory holding instruction/rephrase/generation prompt templates
    #[arg(long)]
    templates_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
    /// Number of genes to hold out for evaluation
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    train_corpus: PathBuf,
    #[arg(long)]
    train_manifest: PathBuf,
    #[arg(long)]
    eval_corpus: PathBuf,
    #[arg(long)]
    eval_manifest: PathBuf,
}

#[derive(Args)]
struct InferArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override a config key, e.g. --set seed=9
    #[arg(long = "set")]
    overrides: Vec<String>,
    /// Output file; defaults to {output_dir}/outputs.jsonl
    #[arg(long)]
    outputs: Option<PathBuf>,
}

#[derive(Args)]
struct GradeArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long = "set")]
    overrides: Vec<String>,
    /// Model outputs to grade; defaults to {output_dir}/outputs.jsonl
    #[arg(long)]
    outputs: Option<PathBuf>,
    /// Also emit a human-grading worksheet to this path
    #[arg(long)]
    rubric: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Eval samples (the reference texts live in their gold records)
    #[arg(long)]
    eval: PathBuf,
    #[arg(long)]
    outputs: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PostprocessArgs {
    /// Line-delimited {id, gene, text} records to repair
    #[arg(long)]
    input: PathBuf,
    /// Gene ID database (tab-separated)
    #[arg(long)]
    db: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Change log (tab-separated: id, start, end, before, after)
    #[arg(long)]
    log: Option<PathBuf>,
    /// Leave outputs that mention no ID unchanged instead of appending one
    #[arg(long)]
    no_append_ids: bool,
}

#[derive(Args)]
struct EmbedEvalArgs {
    #[arg(long)]
    embeddings: PathBuf,
    /// Read the compact binary layout instead of text
    #[arg(long)]
    binary: bool,
    /// symbol<TAB>label file with one functional label per gene
    #[arg(long)]
    labels: PathBuf,
    /// Gene sets file; first line declares the universe
    #[arg(long)]
    gene_sets: Option<PathBuf>,
    #[arg(long, default_value_t = 15)]
    k: usize,
    #[arg(long, default_value = "cosine")]
    metric: String,
    #[arg(long, default_value_t = 1.0)]
    resolution: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    #[arg(long, default_value_t = 10)]
    top_n: usize,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Benchmark-table files to merge (repeatable)
    #[arg(long = "rows", required = true)]
    rows: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::BuildCorpus(args) => build_corpus(args),
        Command::Split(args) => split(args),
        Command::Infer(args) => infer(args),
        Command::Grade(args) => grade(args),
        Command::Metrics(args) => metrics(args),
        Command::Postprocess(args) => postprocess(args),
        Command::EmbedEval(args) => embed_eval(args),
        Command::Report(args) => report(args),
    }
}

fn parse_overrides(raw: &[String]) -> Result<Vec<(String, String)>, HarnessError> {
    raw.iter().map(|s| parse_override(s)).collect()
}

fn create_parent_dirs(path: &Path) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(())
}

fn load_templates(dir: Option<&Path>) -> Result<CorpusTemplates, HarnessError> {
    let Some(dir) = dir else {
        return Ok(CorpusTemplates::default());
    };
    let load = |name: &str| -> Result<PromptTemplate, HarnessError> {
        PromptTemplate::from_file(&dir.join(name))
            .map_err(|e| HarnessError::Config(format!("{}/{name}: {e}", dir.display())))
    };
    Ok(CorpusTemplates {
        instruction: load("instruction_prompt.txt")?,
        rephrase: load("rephrase_prompt.txt")?,
        generation: load("generation_prompt.txt")?,
    })
}

fn build_corpus(args: BuildCorpusArgs) -> Result<(), HarnessError> {
    let catalog: Box<dyn GeneCatalog> = match (&args.catalog_dir, &args.catalog_url) {
        (Some(dir), None) => {
            let file_catalog = FileCatalog::new(dir, args.catalog_version.clone());
            match &args.cache_dir {
                Some(cache) => Box::new(CachingCatalog::new(file_catalog, cache)),
                None => Box::new(file_catalog),
            }
        }
        (None, Some(url)) => {
            let http = HttpCatalog::new(url, args.catalog_version.clone(), args.rate_limit);
            match &args.cache_dir {
                Some(cache) => Box::new(CachingCatalog::new(http, cache)),
                None => Box::new(http),
            }
        }
        _ => {
            return Err(HarnessError::Config(
                "exactly one of --catalog-dir or --catalog-url is required".into(),
            ))
        }
    };

    let provider: Option<HttpProvider> = match &args.provider_endpoint {
        Some(endpoint) => Some(
            HttpProvider::new(ProviderSpec::new(endpoint, &args.provider_model))
                .map_err(|e| HarnessError::Config(e.to_string()))?,
        ),
        None => None,
    };
    if args.synthetic && provider.is_none() {
        return Err(HarnessError::Config(
            "--synthetic requires --provider-endpoint".into(),
        ));
    }
    if args.rephrase && provider.is_none() {
        return Err(HarnessError::Config(
            "--rephrase requires --provider-endpoint".into(),
        ));
    }
    let templates = load_templates(args.templates_dir.as_deref())?;

    let genes_text = std::fs::read_to_string(&args.genes)
        .map_err(|e| HarnessError::Config(format!("{}: {e}", args.genes.display())))?;
    let symbols: Vec<&str> = genes_text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();

    // Per-gene work is a parallel map: fetching and sample construction are
    // independent, the remote client serializes through its rate limiter,
    // and the cache writes atomically. Ordering is restored by the merge.
    struct GeneOutcome {
        symbol: String,
        biotype: Biotype,
        real: Option<InstructionSample>,
        synthetic: Option<InstructionSample>,
        had_summary: bool,
    }
    let outcomes: Vec<GeneOutcome> = symbols
        .par_iter()
        .map(|symbol| -> Result<GeneOutcome, HarnessError> {
            let record = fetch_gene_record(symbol, catalog.as_ref())
                .map_err(|e| HarnessError::Data(format!("{symbol}: {e}")))?;
            let had_summary = record.has_summary();
            let real = if had_summary {
                let rephraser: Option<&dyn Provider> = if args.rephrase {
                    provider.as_ref().map(|p| p as &dyn Provider)
                } else {
                    None
                };
                match build_real_sample(&record, &templates, rephraser) {
                    Ok(sample) => Some(sample),
                    Err(corpus::CorpusError::Provider(e)) => {
                        eprintln!("note: skipping {symbol}: provider failed ({e})");
                        None
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            let synthetic = if args.synthetic && record.biotype == Biotype::ProteinCoding {
                let p = provider.as_ref().expect("checked above");
                match build_synthetic_sample(&record, p, &templates) {
                    Ok(sample) => Some(sample),
                    Err(corpus::CorpusError::Provider(e)) => {
                        eprintln!("note: skipping synthetic {symbol}: provider failed ({e})");
                        None
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            Ok(GeneOutcome {
                symbol: record.symbol.clone(),
                biotype: record.biotype,
                real,
                synthetic,
                had_summary,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut biotypes: BTreeMap<String, Biotype> = BTreeMap::new();
    let mut real = Vec::new();
    let mut synthetic = Vec::new();
    let mut skipped_empty = 0usize;
    for outcome in outcomes {
        biotypes.insert(outcome.symbol, outcome.biotype);
        if !outcome.had_summary {
            skipped_empty += 1;
        }
        real.extend(outcome.real);
        synthetic.extend(outcome.synthetic);
    }

    let manifest = merge_corpora(real, synthetic, &biotypes, args.seed, &args.catalog_version)?;
    create_parent_dirs(&args.corpus_out)?;
    create_parent_dirs(&args.manifest_out)?;
    manifest.save(&args.corpus_out, &args.manifest_out)?;
    println!(
        "built corpus: {} samples over {} genes ({} without summaries skipped)",
        manifest.samples.len(),
        manifest.genes().len(),
        skipped_empty
    );
    for row in &manifest.counts {
        println!("  {} / {} / {}: {}", row.task, row.source, row.biotype, row.count);
    }
    Ok(())
}

fn split(args: SplitArgs) -> Result<(), HarnessError> {
    let manifest = CorpusManifest::load(&args.corpus, &args.manifest)?;
    let (train, eval) = split_eval(&manifest, args.n, args.seed)?;
    for path in [&args.train_corpus, &args.train_manifest, &args.eval_corpus, &args.eval_manifest] {
        create_parent_dirs(path)?;
    }
    train.save(&args.train_corpus, &args.train_manifest)?;
    eval.save(&args.eval_corpus, &args.eval_manifest)?;
    println!(
        "split: {} train samples / {} genes, {} eval samples / {} genes",
        train.samples.len(),
        train.genes().len(),
        eval.samples.len(),
        eval.genes().len()
    );
    Ok(())
}

fn infer(args: InferArgs) -> Result<(), HarnessError> {
    let overrides = parse_overrides(&args.overrides)?;
    let config = RunConfig::load(&args.config, &overrides)?;
    let spec = config
        .provider
        .clone()
        .ok_or_else(|| HarnessError::Config("infer requires provider.endpoint in the config".into()))?;
    let provider = HttpProvider::new(spec).map_err(|e| HarnessError::Config(e.to_string()))?;
    let samples = read_eval_samples(&config.eval_path)?;
    let outputs = run_inference(&config, &samples, &provider)?;
    let out_path = args
        .outputs
        .unwrap_or_else(|| config.output_dir.join("outputs.jsonl"));
    create_parent_dirs(&out_path)?;
    let file = std::fs::File::create(&out_path)?;
    write_outputs(std::io::BufWriter::new(file), &outputs)?;
    let failures = outputs.iter().filter(|o| o.error.is_some()).count();
    println!("wrote {} outputs ({failures} failed) to {}", outputs.len(), out_path.display());
    Ok(())
}

fn grade(args: GradeArgs) -> Result<(), HarnessError> {
    let overrides = parse_overrides(&args.overrides)?;
    let config = RunConfig::load(&args.config, &overrides)?;
    let samples = read_eval_samples(&config.eval_path)?;
    let outputs_path = args
        .outputs
        .unwrap_or_else(|| config.output_dir.join("outputs.jsonl"));
    let outputs = read_outputs(&outputs_path)?;
    let run = run_grading(&config, &samples, &outputs)?;

    std::fs::create_dir_all(&config.output_dir)?;
    let report_path = config.output_dir.join("report.tsv");
    let mut report_buf = Vec::new();
    emit_report(&mut report_buf, std::slice::from_ref(&run.row), &config.resolved_pairs())?;
    std::fs::write(&report_path, report_buf)?;

    let details_path = config.output_dir.join("details.tsv");
    let mut details_buf = Vec::new();
    write_details(&mut details_buf, &run.details)?;
    std::fs::write(&details_path, details_buf)?;

    if let Some(rubric_path) = &args.rubric {
        create_parent_dirs(rubric_path)?;
        let mut rubric_buf = Vec::new();
        write_rubric_worksheet(&mut rubric_buf, &samples, &outputs)?;
        std::fs::write(rubric_path, rubric_buf)?;
    }

    println!(
        "graded {} samples: factual {:.3}, structural {:.3}, average {:.3} ({} unparseable)",
        run.report.per_sample.len(),
        run.report.factual_mean,
        run.report.structural_mean,
        run.report.average,
        run.unparseable_count
    );
    println!("report: {}", report_path.display());
    Ok(())
}

fn metrics(args: MetricsArgs) -> Result<(), HarnessError> {
    let samples = read_eval_samples(&args.eval)?;
    let outputs = read_outputs(&args.outputs)?;
    if samples.len() != outputs.len() {
        return Err(HarnessError::Misaligned(format!(
            "{} samples vs {} outputs",
            samples.len(),
            outputs.len()
        )));
    }
    create_parent_dirs(&args.out)?;
    let mut out = std::io::BufWriter::new(std::fs::File::create(&args.out)?);
    writeln!(out, "id\tbleu\trouge1")?;
    let mut bleu_sum = 0.0;
    let mut rouge_sum = 0.0;
    let mut count = 0usize;
    for (sample, output) in samples.iter().zip(&outputs) {
        if sample.id != output.id {
            return Err(HarnessError::Misaligned(format!(
                "sample {:?} vs output {:?}",
                sample.id, output.id
            )));
        }
        let Gold::Gene(record) = &sample.gold else {
            return Err(HarnessError::Data(format!(
                "sample {:?}: metrics are defined against gene summaries; task is {:?}",
                sample.id, sample.task
            )));
        };
        let reference = tokenize(&record.summary);
        let candidate = tokenize(&output.output);
        let b = bleu(&candidate, &reference, 4).value;
        let r = rouge_k_recall(&candidate, &reference, 1)?.value;
        writeln!(out, "{}\t{b:.6}\t{r:.6}", sample.id)?;
        bleu_sum += b;
        rouge_sum += r;
        count += 1;
    }
    writeln!(
        out,
        "mean\t{:.6}\t{:.6}",
        bleu_sum / count.max(1) as f64,
        rouge_sum / count.max(1) as f64
    )?;
    println!("wrote metrics for {count} samples to {}", args.out.display());
    Ok(())
}

#[derive(serde::Deserialize, serde::Serialize)]
struct RepairRecord {
    id: String,
    gene: String,
    text: String,
}

fn postprocess(args: PostprocessArgs) -> Result<(), HarnessError> {
    let database = GeneIdDatabase::from_file(&args.db)?;
    let options = RepairOptions {
        append_missing_ids: !args.no_append_ids,
    };
    let input = std::fs::read_to_string(&args.input)
        .map_err(|e| HarnessError::Data(format!("{}: {e}", args.input.display())))?;
    create_parent_dirs(&args.out)?;
    let mut out = std::io::BufWriter::new(std::fs::File::create(&args.out)?);
    let mut log: Vec<String> = vec!["id\tstart\tend\tbefore\tafter".to_string()];
    let mut repaired_count = 0usize;
    for (i, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: RepairRecord = serde_json::from_str(line)
            .map_err(|e| HarnessError::Data(format!("{} line {}: {e}", args.input.display(), i + 1)))?;
        let (repaired, edits) = repair_output(&record.text, &record.gene, &database, &options)?;
        if !edits.is_empty() {
            repaired_count += 1;
        }
        for edit in &edits {
            log.push(format!(
                "{}\t{}\t{}\t{}\t{}",
                record.id,
                edit.start,
                edit.end,
                edit.before.replace(['\t', '\n'], " "),
                edit.after.replace(['\t', '\n'], " ")
            ));
        }
        serde_json::to_writer(
            &mut out,
            &RepairRecord {
                id: record.id,
                gene: record.gene,
                text: repaired,
            },
        )?;
        out.write_all(b"\n")?;
    }
    if let Some(log_path) = &args.log {
        create_parent_dirs(log_path)?;
        std::fs::write(log_path, log.join("\n") + "\n")?;
    }
    println!("repaired {repaired_count} records into {}", args.out.display());
    Ok(())
}

fn embed_eval(args: EmbedEvalArgs) -> Result<(), HarnessError> {
    let matrix = if args.binary {
        EmbeddingMatrix::read_binary(&args.embeddings)?
    } else {
        EmbeddingMatrix::read_text(&args.embeddings)?
    };
    let metric: Metric = args
        .metric
        .parse()
        .map_err(HarnessError::Config)?;
    let label_table = LabelVector::parse_table(
        &std::fs::read_to_string(&args.labels)
            .map_err(|e| HarnessError::Data(format!("{}: {e}", args.labels.display())))?,
    )?;
    let labels = LabelVector::for_matrix(&matrix, &label_table)?;

    let graph = knn_graph(&matrix, args.k, metric)?;
    let partition = leiden(&graph, args.resolution, args.seed, args.max_iters);
    let q = modularity(&graph, &partition, args.resolution);
    let score = nmi(partition.assignment(), &labels.to_indices())?;

    std::fs::create_dir_all(&args.out_dir)?;
    let mut partition_out = String::from("# symbol\tcommunity\n");
    for (symbol, &community) in matrix.row_ids().iter().zip(partition.assignment()) {
        partition_out.push_str(&format!("{symbol}\t{community}\n"));
    }
    std::fs::write(args.out_dir.join("partition.tsv"), partition_out)?;
    std::fs::write(
        args.out_dir.join("nmi.txt"),
        format!(
            "nmi\t{score:.6}\ncommunities\t{}\nmodularity\t{q:.6}\nresolution\t{}\nk\t{}\nseed\t{}\n",
            partition.community_count(),
            args.resolution,
            args.k,
            args.seed
        ),
    )?;

    // Communities ranked by size, largest first, ties by community id.
    let mut communities: Vec<(usize, Vec<usize>)> =
        partition.communities().into_iter().enumerate().collect();
    communities.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
    let mut sizes_out = String::from("# community\tsize\n");
    for (id, members) in &communities {
        sizes_out.push_str(&format!("{id}\t{}\n", members.len()));
    }
    std::fs::write(args.out_dir.join("cluster_sizes.tsv"), sizes_out)?;

    if let Some(gene_sets_path) = &args.gene_sets {
        let collection = GeneSetCollection::from_file(gene_sets_path)?;
        let mut enrichment_out = String::from("# cluster\tpathway\toverlap\traw_p\tbonferroni_p\n");
        let mut top_out = String::from("# cluster\trank\tpathway\tbonferroni_p\n");
        for (id, members) in &communities {
            let cluster_genes: std::collections::BTreeSet<String> = members
                .iter()
                .map(|&i| matrix.row_ids()[i].clone())
                .filter(|s| collection.universe().contains(s))
                .collect();
            if cluster_genes.is_empty() {
                continue;
            }
            let rows = enrich_clusters(&cluster_genes, &collection)?;
            let ranked: Vec<(String, f64)> = rows
                .iter()
                .map(|r| (r.pathway.clone(), r.adjusted_p))
                .collect();
            for row in &rows {
                enrichment_out.push_str(&format!(
                    "{id}\t{}\t{}\t{:.6e}\t{:.6e}\n",
                    row.pathway, row.overlap, row.raw_p, row.adjusted_p
                ));
            }
            for (rank, (pathway, p)) in top_pathways(&ranked, args.top_n).iter().enumerate() {
                top_out.push_str(&format!("{id}\t{}\t{pathway}\t{p:.6e}\n", rank + 1));
            }
        }
        std::fs::write(args.out_dir.join("enrichment.tsv"), enrichment_out)?;
        std::fs::write(args.out_dir.join("top_pathways.tsv"), top_out)?;
    }

    println!(
        "embed-eval: {} nodes, {} communities, nmi {:.4}, modularity {:.4} -> {}",
        matrix.rows(),
        partition.community_count(),
        score,
        q,
        args.out_dir.display()
    );
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), HarnessError> {
    let mut rows = Vec::new();
    for path in &args.rows {
        rows.extend(read_benchmark_table(path)?);
    }
    create_parent_dirs(&args.out)?;
    let mut buf = Vec::new();
    emit_report(&mut buf, &rows, &[])?;
    std::fs::write(&args.out, buf)?;
    println!("wrote report with {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

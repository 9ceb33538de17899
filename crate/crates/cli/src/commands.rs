use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use govsg_agents::report::{render, AnnotatedReport, AnnotationsFile, Format, SupportLabel};
use govsg_agents::vsg::{
    build_study_group, orchestrate, ChatBackend, GoTermRef, HttpBackend, MockBackend, MockScript, RunParams,
    TaskStatus, Transcript, VsgConfig, VsgError,
};
use govsg_core::annotations::{load_annotations, parse_annotation_tsv};
use govsg_core::hfs::{rank_dataset, HfsError, HfsOptions};
use govsg_core::ontology::parse_obo;
use govsg_core::RankedTermTable;

use crate::config::{read_text, PipelineConfig};
use crate::CliError;

pub const BACKEND_URL_ENV: &str = "GOVSG_BACKEND_URL";

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

/// Ranks every configured organism and writes `<org>.tsv`, `<org>.json`
/// and `<org>.load_report.txt` into `out`.
pub fn rank(cfg: &PipelineConfig, out: &Path) -> Result<Vec<RankedTermTable>, CliError> {
    let obo = read_text(&cfg.ontology)?;
    let (graph, parsed) =
        parse_obo(&obo).map_err(|e| CliError::Input(format!("{}: {e}", cfg.ontology.display())))?;
    println!(
        "ontology {}: {} terms ({} obsolete dropped)",
        cfg.ontology.display(),
        graph.len(),
        parsed.obsolete_dropped
    );
    let graph = Arc::new(graph);
    let opts = HfsOptions::from(cfg.hfs);
    let mut tables = Vec::new();
    for d in &cfg.datasets {
        let ctx = |e: &dyn std::fmt::Display| format!("{} ({}): {e}", d.annotations.display(), d.organism);
        let rows = parse_annotation_tsv(&read_text(&d.annotations)?);
        let (ds, report) =
            load_annotations(&d.organism, &rows, graph.clone()).map_err(|e| CliError::Input(ctx(&e)))?;
        let ranked = rank_dataset::<f64>(&ds, &opts).map_err(|e| match e {
            HfsError::MissingLabels(_) => CliError::Input(ctx(&e)),
            other => CliError::Runtime(ctx(&other)),
        })?;
        let table = ranked.table;
        write(&out.join(format!("{}.tsv", d.organism)), &table.to_tsv())?;
        write(&out.join(format!("{}.json", d.organism)), &table.to_json())?;
        write(&out.join(format!("{}.load_report.txt", d.organism)), &report.to_text())?;
        let top: Vec<String> = table.top(3).iter().map(|r| format!("{} {}", r.term, r.name)).collect();
        println!(
            "ranked {}: {} genes, {} terms, {} rows skipped; top: {}",
            d.organism,
            ds.instances().len(),
            ds.feature_universe().len(),
            report.skipped.len(),
            top.join("; ")
        );
        tables.push(table);
    }
    Ok(tables)
}

/// Gives organisms without configured terms the top `k` ranked terms.
pub fn fill_terms(vsg: &mut VsgConfig, tables: &[RankedTermTable], k: usize) {
    for org in vsg.organisms.iter_mut().filter(|o| o.terms.is_empty()) {
        if let Some(t) = tables.iter().find(|t| t.organism == org.name) {
            org.terms = t
                .top(k)
                .iter()
                .map(|r| GoTermRef {
                    id: r.term.clone(),
                    label: r.name.clone(),
                })
                .collect();
        }
    }
}

pub enum BackendChoice<'a> {
    Mock(Option<&'a Path>),
    Live,
}

fn make_backend(cfg: &VsgConfig, choice: BackendChoice<'_>) -> Result<Box<dyn ChatBackend>, CliError> {
    match choice {
        BackendChoice::Mock(None) => Err(CliError::Input(
            "mock mode needs --mock-script <path> (use --live for a real backend)".into(),
        )),
        BackendChoice::Mock(Some(path)) => {
            if !path.is_file() {
                return Err(CliError::Input(format!("{}: mock script not found", path.display())));
            }
            let script = MockScript::load(path).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Box::new(MockBackend::new(script)))
        }
        BackendChoice::Live => {
            let url = std::env::var(BACKEND_URL_ENV)
                .ok()
                .filter(|u| !u.is_empty())
                .or_else(|| cfg.backend.url.clone())
                .ok_or_else(|| {
                    CliError::Input(format!("--live needs a backend url in the config or {BACKEND_URL_ENV}"))
                })?;
            let backend = HttpBackend::new(url, &cfg.backend.response_path)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            Ok(Box::new(backend))
        }
    }
}

fn print_statuses(t: &Transcript) {
    for o in &t.outputs {
        let status = match o.status {
            TaskStatus::Completed => "completed",
            TaskStatus::Failed => "FAILED",
            TaskStatus::Skipped => "skipped",
        };
        match &o.error {
            Some(e) => println!("{status:<9} {} (retries {}): {e}", o.task_id, o.retries),
            None => println!("{status:<9} {} (retries {})", o.task_id, o.retries),
        }
    }
}

/// A failed run keeps its partial transcript when one was produced.
pub type VsgFailure = (Option<Box<Transcript>>, CliError);

/// Runs the study group; the transcript lands in `<out>/<run_id>/`.
/// A failed run still returns its partial transcript alongside the error.
pub fn vsg(
    cfg: &VsgConfig,
    choice: BackendChoice<'_>,
    out: &Path,
) -> Result<(Transcript, PathBuf), VsgFailure> {
    let input = |e: VsgError| (None, CliError::Input(e.to_string()));
    let graph = build_study_group(cfg).map_err(input)?;
    let backend = make_backend(cfg, choice).map_err(|e| (None, e))?;
    let params = RunParams {
        run_id: cfg.run_id(),
        config_digest: cfg.digest(),
        sampling: cfg.sampling.clone(),
        retry: cfg.retry.policy(),
        persist_dir: Some(out.to_path_buf()),
    };
    println!(
        "run {}: {} agents, {} tasks, {} dependency edges",
        params.run_id,
        graph.agents.len(),
        graph.tasks.len(),
        graph.dependency_edges()
    );
    let dir = out.join(&params.run_id);
    match orchestrate(&graph, backend.as_ref(), &params) {
        Ok(t) => {
            print_statuses(&t);
            println!("transcript written to {}", dir.display());
            Ok((t, dir))
        }
        Err(VsgError::RunFailed {
            transcript,
            failed_task,
            message,
        }) => {
            print_statuses(&transcript);
            println!("partial transcript written to {}", dir.display());
            Err((
                Some(transcript),
                CliError::Runtime(format!("run {} failed at {failed_task}: {message}", params.run_id)),
            ))
        }
        Err(VsgError::Persist(e)) => Err((None, CliError::Runtime(format!("{}: {e}", out.display())))),
        Err(e) => Err(input(e)),
    }
}

pub fn load_transcript(path: &Path) -> Result<Transcript, CliError> {
    Transcript::from_json_str(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// An empty or whitespace-only file means "no annotations".
pub fn load_annotations_file(path: &Path, run_id: &str) -> Result<AnnotationsFile, CliError> {
    let text = read_text(path)?;
    if text.trim().is_empty() {
        return Ok(AnnotationsFile {
            run_id: run_id.to_string(),
            annotations: Vec::new(),
        });
    }
    AnnotationsFile::from_json_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Renders `report.md` and/or `report.html` into `out`.
pub fn report(
    transcript: Transcript,
    annotations: Option<&Path>,
    formats: &[Format],
    out: &Path,
) -> Result<AnnotatedReport, CliError> {
    let mut report = AnnotatedReport::from_transcript(transcript);
    if let Some(path) = annotations {
        let file = load_annotations_file(path, &report.transcript().run_id)?;
        let unknown = report.unknown_claims(&file);
        if !unknown.is_empty() {
            return Err(CliError::Input(format!(
                "{}: unknown claim id(s): {}",
                path.display(),
                unknown.join(", ")
            )));
        }
        report
            .apply(&file)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    for &format in formats {
        let path = out.join(format!("report.{}", format.extension()));
        write(&path, &render(&report, format))?;
        println!("wrote {}", path.display());
    }
    print!("{}", report.summary_text());
    let totals = report.totals();
    let counts: Vec<String> = SupportLabel::ALL
        .iter()
        .map(|&l| format!("{l}={}", totals.get(l)))
        .collect();
    println!("total {}", counts.join(" "));
    Ok(report)
}

/// rank, then the study group over the ranked terms, then the report.
pub fn pipeline(
    cfg: &PipelineConfig,
    seed: Option<u64>,
    choice: BackendChoice<'_>,
    annotations: Option<&Path>,
    formats: &[Format],
    out: &Path,
) -> Result<(), CliError> {
    let mut vsg_cfg = cfg
        .vsg
        .clone()
        .ok_or_else(|| CliError::Input("pipeline config has no [vsg] section".into()))?;
    let tables = rank(cfg, &out.join("rank"))?;
    fill_terms(&mut vsg_cfg, &tables, cfg.top_terms);
    if let Some(seed) = seed {
        vsg_cfg.sampling.seed = Some(seed);
    }
    let (transcript, failure) = match vsg(&vsg_cfg, choice, &out.join("transcripts")) {
        Ok((t, _)) => (t, None),
        Err((Some(t), e)) => (*t, Some(e)),
        Err((None, e)) => return Err(e),
    };
    report(transcript, annotations, formats, &out.join("report"))?;
    failure.map_or(Ok(()), Err)
}

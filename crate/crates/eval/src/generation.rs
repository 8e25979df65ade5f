use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use emocirc_gateway::{
    render_prompt, Gateway, GatewayError, GenerationRecord, GenerationRequest, LogLine,
};

use crate::error::EvalError;
use crate::logs::write_jsonl;
use crate::plan::{Cell, ExperimentPlan};

#[derive(Debug, Clone)]
pub struct GenerationSummary {
    pub plan_hash: String,
    pub expected: usize,
    pub generated: usize,
    pub cache_hits: usize,
    /// Cells that failed on the first pass and succeeded on the retry pass.
    pub recovered: Vec<String>,
    /// Records in canonical cell order.
    pub records: Vec<GenerationRecord>,
}

fn describe(plan: &ExperimentPlan, cell: &Cell) -> String {
    format!(
        "{} state {} question {} sample {}",
        plan.models[cell.model].provider_id, cell.state, cell.question_id, cell.sample
    )
}

fn request(plan: &ExperimentPlan, cell: &Cell) -> Result<GenerationRequest, EvalError> {
    let model = &plan.models[cell.model];
    let question = &plan.questions[cell.question_id as usize - 1];
    let bundle = render_prompt(&plan.template, &cell.spec, cell.question_id, question)?;
    Ok(GenerationRequest {
        provider_id: model.provider_id.clone(),
        model: model.model.clone(),
        bundle,
        params: model.params.clone(),
        max_retries: plan.max_retries,
        target: cell.target,
        sample: cell.sample,
    })
}

/// Generates every cell of the plan with up to `workers` requests in flight,
/// retries failed cells once more, and writes the records to `out` in
/// canonical cell order so reruns produce identical logs.
pub fn run_generation(
    plan: &ExperimentPlan,
    gateway: &Gateway,
    workers: usize,
    out: &Path,
    run_id: &str,
) -> Result<GenerationSummary, EvalError> {
    let cells = plan.cells()?;
    for m in &plan.models {
        if !gateway.has_provider(&m.provider_id) {
            return Err(GatewayError::UnknownProvider(m.provider_id.clone()).into());
        }
    }
    let requests = cells
        .iter()
        .map(|c| request(plan, c))
        .collect::<Result<Vec<_>, _>>()?;

    let slots: Vec<Mutex<Option<Result<GenerationRecord, GatewayError>>>> =
        requests.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..workers.clamp(1, requests.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= requests.len() {
                    break;
                }
                let outcome = gateway.generate(&requests[i]);
                *slots[i].lock().unwrap() = Some(outcome);
            });
        }
    });

    let mut records = Vec::with_capacity(requests.len());
    let mut recovered = Vec::new();
    let mut missing = Vec::new();
    for (i, slot) in slots.into_iter().enumerate() {
        let first = slot.into_inner().unwrap().expect("every cell attempted");
        let outcome = match first {
            Ok(r) => Ok(r),
            Err(_) => {
                let again = gateway.generate(&requests[i]);
                if again.is_ok() {
                    recovered.push(describe(plan, &cells[i]));
                }
                again
            }
        };
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => missing.push(format!("{}: {e}", describe(plan, &cells[i]))),
        }
    }
    if !missing.is_empty() {
        return Err(EvalError::MissingCells(missing));
    }

    let lines: Vec<LogLine> = records.iter().map(|r| r.to_log_line(run_id)).collect();
    write_jsonl(out, &lines)?;
    Ok(GenerationSummary {
        plan_hash: plan.hash(),
        expected: plan.cell_count(),
        generated: records.len(),
        cache_hits: records.iter().filter(|r| r.cache_hit).count(),
        recovered,
        records,
    })
}

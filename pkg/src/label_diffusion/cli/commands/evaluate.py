from ...evaluation.metrics import subcategory_report
from ...evaluation.reports import write_records_csv, write_summary_csv
from ...evaluation.runner import EvalSettings, evaluate_scenes
from ..config import RunConfig, write_resolved_config
from ..utils import ar_table, console, ensure_output_dir
from .common import load_split, load_trained_model


def eval_settings(config: RunConfig) -> EvalSettings:
    return EvalSettings(
        guidance=config.guidance(),
        decode=config.decode_strategy(),
        batch_size=config.eval_batch_size,
        workers=config.eval_workers,
        seed=config.seed,
    )


def run_eval(args, config: RunConfig) -> None:
    """Sample every phrase of the chosen split; writes records.csv and summary.csv."""
    scenes = load_split(config, config.eval_split)
    model = load_trained_model(config)
    grid = config.grid()
    output = ensure_output_dir(config.output)

    records = evaluate_scenes(scenes, model, eval_settings(config))
    report = subcategory_report(records, grid)
    write_records_csv(records, output / "records.csv")
    write_summary_csv(report, output / "summary.csv")
    write_resolved_config(config, output)
    console.print(ar_table([(config.eval_split, report)], title=f"Average Recall over {len(records)} phrases", label="Split"))

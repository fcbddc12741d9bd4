from ...codec.label_codec import decode_label
from ...data.manifest import read_image_png, write_mask_png
from ...errors import ParameterError
from ...sampling.sampler import TRAJECTORY_TIMESTEPS, SampleRequest, SamplingTrace, sample_mask
from ..config import RunConfig, write_resolved_config
from ..utils import console, ensure_output_dir, require_path
from .common import load_trained_model


def run_sample(args, config: RunConfig) -> None:
    """Segment one phrase in one image; writes mask.png and its mask.txt record."""
    if not config.phrase.strip():
        raise ParameterError("sample needs a non-empty --phrase")
    image = read_image_png(require_path(config.image, "input image"))
    request = SampleRequest(
        image=image,
        phrase=config.phrase,
        guidance=config.guidance(),
        decode=config.decode_strategy(),
        seed=config.seed,
    )
    model = load_trained_model(config)
    output = ensure_output_dir(config.output)

    trace = SamplingTrace(capture_x0=config.trajectory)
    mask = sample_mask(request, model, trace)
    write_mask_png(mask, output / "mask.png")
    record = dict(request.record(), denoiser_calls=str(trace.denoiser_calls))
    (output / "mask.txt").write_text("".join(f"{k}={v}\n" for k, v in sorted(record.items())), encoding="utf-8")

    if config.trajectory:
        height, width = request.size
        for t in TRAJECTORY_TIMESTEPS:
            if t >= model.schedule.total_steps:
                continue
            estimate = trace.x0_at(t)[0]
            frame = decode_label(estimate, height, width, request.decode, model.label_decoder)
            write_mask_png(frame, output / f"mask_t{t:04d}.png")
    write_resolved_config(config, output)
    console.print(f"'{config.phrase}': {int(mask.sum())} of {mask.size} pixels selected; mask written to {output}")

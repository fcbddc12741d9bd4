from ...data.generator import generate_scenes
from ...data.manifest import write_manifest
from ..config import RunConfig, write_resolved_config
from ..utils import console, ensure_output_dir


def run_gen(args, config: RunConfig) -> None:
    """Generate a synthetic dataset into ``config.output``."""
    output = ensure_output_dir(config.output)
    spec = config.scene_spec()
    manifest = write_manifest(generate_scenes(config.n_scenes, config.seed, spec), output)
    write_resolved_config(config, output)
    console.print(
        f"Wrote {len(manifest)} scenes ({manifest.phrase_count} phrases, "
        f"{spec.image_size}x{spec.image_size}) to {output}"
    )

from label_diffusion.cli.commands.ablate import run_ablate
from label_diffusion.cli.commands.evaluate import run_eval
from label_diffusion.cli.commands.gen import run_gen
from label_diffusion.cli.commands.sample import run_sample
from label_diffusion.cli.commands.train import run_train

# Flags default to None so that unset flags never override the config file.


def _add_common_args(parser):
    parser.add_argument("--config", type=str, help="Flat key=value config file; flags override its values")
    parser.add_argument("--seed", type=int, default=None, help="Random seed")
    parser.add_argument("--output", type=str, default=None, help="Output directory")


def _add_split_args(parser):
    parser.add_argument("--dataset", type=str, default=None, help="Dataset directory containing manifest.jsonl")
    parser.add_argument("--train-frac", dest="train_frac", type=float, default=None, help="Fraction of scenes used for training")
    parser.add_argument("--split-seed", dest="split_seed", type=int, default=None, help="Seed of the train/test split")


def _add_sampling_args(parser):
    parser.add_argument("--checkpoint", type=str, default=None, help="Model checkpoint file")
    parser.add_argument("--guidance-scale", dest="guidance_scale", type=float, default=None,
                        help="Classifier-free guidance scale w (1.0 disables guidance)")
    parser.add_argument("--sampler", type=str, choices=["ddim", "ddpm"], default=None, help="Reverse-process stepper")
    parser.add_argument("--ddim-steps", dest="ddim_steps", type=int, default=None, help="Number of DDIM steps")
    parser.add_argument("--decode", type=str, choices=["bilinear_cfg", "nearest", "learned_decoder"], default=None,
                        help="Latent-to-mask decode strategy")
    parser.add_argument("--threshold", type=float, default=None, help="Decode threshold in (-1, 1)")


def _add_eval_args(parser):
    parser.add_argument("--eval-split", dest="eval_split", type=str, choices=["train", "test", "all"], default=None,
                        help="Which part of the dataset to evaluate")
    parser.add_argument("--grid-denominator", dest="grid_denominator", type=int, default=None,
                        help="AR thresholds are k/denominator for k = 1..denominator-1")
    parser.add_argument("--eval-batch-size", dest="eval_batch_size", type=int, default=None, help="Phrases per sampling batch")
    parser.add_argument("--eval-workers", dest="eval_workers", type=int, default=None,
                        help="Evaluation threads (0 = single-threaded, reproducible)")


def add_gen_parser(subparsers):
    gen_parser = subparsers.add_parser("gen", help="Generate a synthetic shapes dataset")
    _add_common_args(gen_parser)
    gen_parser.add_argument("-n", "--n-scenes", dest="n_scenes", type=int, default=None, help="Number of scenes")
    gen_parser.add_argument("--image-size", dest="image_size", type=int, default=None, help="Square image size (multiple of 8)")
    gen_parser.add_argument("--min-groups", dest="min_groups", type=int, default=None, help="Minimum thing groups per scene")
    gen_parser.add_argument("--max-groups", dest="max_groups", type=int, default=None, help="Maximum thing groups per scene")
    gen_parser.add_argument("--max-instances", dest="max_instances", type=int, default=None, help="Maximum instances per group (<= 3)")
    gen_parser.add_argument("--spatial-words", dest="spatial_words", action="store_true", default=None,
                            help="Add location words to singular thing phrases")
    gen_parser.set_defaults(func=run_gen)


def add_train_parser(subparsers):
    train_parser = subparsers.add_parser("train", help="Train a model on the train split")
    _add_common_args(train_parser)
    _add_split_args(train_parser)
    train_parser.add_argument("--checkpoint", type=str, default=None, help="Checkpoint file (default: <output>/checkpoint.pt)")
    train_parser.add_argument("--resume", action="store_true", default=None, help="Continue from an existing checkpoint")
    train_parser.add_argument("--epochs", type=int, default=None, help="Training epochs")
    train_parser.add_argument("--max-steps", dest="max_steps", type=int, default=None, help="Stop after this many steps (0 = no cap)")
    train_parser.add_argument("--batch-size", dest="batch_size", type=int, default=None, help="Phrases per batch")
    train_parser.add_argument("--learning-rate", dest="learning_rate", type=float, default=None, help="Adam learning rate")
    train_parser.add_argument("--p-drop", dest="p_drop", type=float, default=None, help="Conditional dropout probability")
    train_parser.add_argument("--total-steps", dest="total_steps", type=int, default=None, help="Diffusion steps T")
    train_parser.add_argument("--schedule", type=str, choices=["linear", "cosine"], default=None, help="Noise schedule")
    train_parser.add_argument("--base-width", dest="base_width", type=int, default=None, help="U-Net base channel width")
    train_parser.add_argument("--channel-mults", dest="channel_mults", type=str, default=None, help="Comma-separated level multipliers")
    train_parser.add_argument("--log-interval", dest="log_interval", type=int, default=None, help="Steps between loss CSV rows")
    train_parser.add_argument("--checkpoint-interval", dest="checkpoint_interval", type=int, default=None,
                              help="Steps between periodic checkpoints (0 = only at the end)")
    train_parser.add_argument("--num-workers", dest="num_workers", type=int, default=None,
                              help="DataLoader workers (0 = single-threaded, deterministic)")
    train_parser.add_argument("--label-decoder-epochs", dest="label_decoder_epochs", type=int, default=None,
                              help="Also train a learned label decoder for this many epochs")
    train_parser.set_defaults(func=run_train)


def add_sample_parser(subparsers):
    sample_parser = subparsers.add_parser("sample", help="Segment one phrase in one image")
    _add_common_args(sample_parser)
    _add_sampling_args(sample_parser)
    sample_parser.add_argument("--image", type=str, default=None, help="Input RGB PNG")
    sample_parser.add_argument("--phrase", type=str, default=None, help="Noun phrase to segment")
    sample_parser.add_argument("--trajectory", action="store_true", default=None,
                               help="Also write decoded x0 estimates along the reverse process")
    sample_parser.set_defaults(func=run_sample)


def add_eval_parser(subparsers):
    eval_parser = subparsers.add_parser("eval", help="Compute per-phrase IoU and the five Average Recall values")
    _add_common_args(eval_parser)
    _add_split_args(eval_parser)
    _add_sampling_args(eval_parser)
    _add_eval_args(eval_parser)
    eval_parser.set_defaults(func=run_eval)


def add_ablate_parser(subparsers):
    ablate_parser = subparsers.add_parser("ablate", help="Evaluate one ablation axis over several values")
    _add_common_args(ablate_parser)
    _add_split_args(ablate_parser)
    _add_sampling_args(ablate_parser)
    _add_eval_args(ablate_parser)
    ablate_parser.add_argument("--axis", type=str, default=None,
                               help="IMAGE_SIZE, DDIM_STEPS, GUIDANCE_SCALE or DECODE_STRATEGY")
    ablate_parser.add_argument("--values", type=str, default=None, help="Comma-separated axis values, e.g. 20,30,50")
    ablate_parser.set_defaults(func=run_ablate)

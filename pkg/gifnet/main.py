#!/usr/bin/env python3
"""gifnet main entry point.

This module contains the command-line interface: dataset augmentation,
training, fusion, enhancement, evaluation, the component ablation and the
small helper commands. It parses arguments, layers the configuration, and
maps library exceptions to exit codes.
"""

import argparse
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import torch
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table

from gifnet import __version__
from gifnet.config import CONFIG_CHOICES, CONFIG_TYPES, DEFAULT_CONFIG, RunConfig
from gifnet.data import MANIFEST_NAME, DatasetManifest, build_dataset, make_synthetic_pairs
from gifnet.error_handler import display_error
from gifnet.errors import ConfigError, GifnetError
from gifnet.fusion import (
    ColorSource,
    FusionRequest,
    enhance_single,
    export_feature_maps,
    fuse_pair,
)
from gifnet.imaging import load_image, save_image
from gifnet.metrics import METRIC_NAMES, evaluate_dir
from gifnet.network import Interaction, load_checkpoint
from gifnet.training import (
    ABLATION_FILE,
    ABLATION_VARIANTS,
    StepReport,
    default_log_path,
    run_ablation,
    train_loop,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(message)s",
    datefmt="[%X]",
    handlers=[RichHandler(rich_tracebacks=True)],
)
logger = logging.getLogger("gifnet")

ARCH_FLAGS = {
    "base_channels": "Channels per shared-encoder block",
    "enc_layers": "Number of densely connected encoder blocks",
    "branch_layers": "Layers per task branch (even)",
    "embed_dim": "Token width inside the task branches",
    "heads": "Attention heads",
    "window": "Attention window side",
    "mlp_ratio": "Hidden width of the branch MLPs relative to embed_dim",
}

TRAIN_FLAGS = {
    "steps": "Number of optimization steps",
    "batch": "Crops per step",
    "crop": "Square crop side (multiple of the window)",
    "lr": "Adam learning rate",
    "seed": "Run seed (initialization and crops)",
    "alternation": "Granularity of the MM/DP role swap",
    "checkpoint_every": "Write a checkpoint every N steps (0 disables)",
    "grad_clip": "Global gradient-norm clip (0 disables)",
    "tasks": "Which tasks to train",
    "interaction": "How the auxiliary branch feeds the main branch",
    "saliency": "Saliency backend for the MM loss weights",
    "saliency_weights": "DenseNet-121 state dict for the classifier-grad backend",
    "workers": "Data loader worker processes (0 loads in the main process)",
}


def configure_logging(verbose: bool) -> None:
    """Configure logging level based on verbose flag.

    Args:
        verbose: Whether to enable verbose logging
    """
    if verbose:
        logger.setLevel(logging.DEBUG)
        logger.debug("Verbose logging enabled")
    else:
        logger.setLevel(logging.INFO)


def _add_config_flag(group: argparse._ArgumentGroup, key: str, help_text: str) -> None:
    """Add ``--key`` overriding config key ``key``; absent flags leave the config alone."""
    group.add_argument(
        "--" + key.replace("_", "-"),
        dest=key,
        type=CONFIG_TYPES[key],
        choices=CONFIG_CHOICES.get(key),
        default=argparse.SUPPRESS,
        help=f"{help_text} (default: {DEFAULT_CONFIG[key]!r})",
    )


def _add_arch_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Architecture")
    for key, help_text in ARCH_FLAGS.items():
        _add_config_flag(group, key, help_text)


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Training")
    for key, help_text in TRAIN_FLAGS.items():
        _add_config_flag(group, key, help_text)
    group.add_argument(
        "--no-rec",
        dest="use_rec",
        action="store_const",
        const=False,
        default=argparse.SUPPRESS,
        help="Disable the REC branch and its public loss",
    )
    group.add_argument(
        "--raw-softmax",
        dest="raw_softmax",
        action="store_const",
        const=True,
        default=argparse.SUPPRESS,
        help="Apply softmax to raw saliency scores (no temperature)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--verbose",
        action="store_true",
        help="Enable verbose mode with detailed logging",
    )
    common.add_argument(
        "--config",
        dest="config_file",
        metavar="FILE",
        help="key = value configuration file; flags override its values",
    )

    parser = argparse.ArgumentParser(
        prog="gifnet",
        description="gifnet - generalised image fusion through low-level task interaction",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name,
            help=help_text,
            description=help_text,
            parents=[common],
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )

    augment = add(
        "augment",
        "Build the RGB-focused joint dataset from aligned visible/infrared pairs",
    )
    paths = augment.add_argument_group("Paths")
    paths.add_argument("--vis", required=True, help="Directory of visible RGB images")
    paths.add_argument("--ir", required=True, help="Directory of infrared images")
    paths.add_argument("--out", required=True, help="Output dataset directory")
    options = augment.add_argument_group("Augmentation")
    _add_config_flag(options, "sigma", "Gaussian blur sigma of the defocused regions")
    _add_config_flag(options, "mask", "Focus mask family")
    _add_config_flag(options, "seed", "Mask seed")
    _add_config_flag(options, "augment_workers", "Parallel sample builders")

    train = add("train", "Train the network with alternating MM/DP optimization")
    paths = train.add_argument_group("Paths")
    paths.add_argument("--data", required=True, help="Dataset manifest (manifest.txt)")
    paths.add_argument("--out", required=True, help="Final checkpoint path")
    paths.add_argument("--log", help="Report log path (default: <out>.log)")
    _add_train_flags(train)
    _add_arch_flags(train)

    fuse = add("fuse", "Fuse an aligned image pair")
    fuse.add_argument("--ckpt", required=True, help="Trained checkpoint")
    fuse.add_argument("--a", required=True, help="First input (chroma donor by default)")
    fuse.add_argument("--b", required=True, help="Second input")
    fuse.add_argument("--out", required=True, help="Output PNG")
    fuse.add_argument(
        "--color",
        choices=[c.value for c in ColorSource],
        default=ColorSource.A.value,
        help="Input donating chroma when 3-channel",
    )
    _add_config_flag(fuse, "interaction", "How the auxiliary branch feeds the main branch")

    enhance = add("enhance", "Enhance a single image by fusing it with itself")
    enhance.add_argument("--ckpt", required=True, help="Trained checkpoint")
    enhance.add_argument("--in", dest="input", required=True, help="Input image")
    enhance.add_argument("--out", required=True, help="Output PNG")
    _add_config_flag(enhance, "interaction", "How the auxiliary branch feeds the main branch")

    evaluate = add("eval", "Compute EI, AG, VIF and SCD for a directory of fused images")
    evaluate.add_argument("--fused", required=True, help="Directory of fused images")
    evaluate.add_argument("--a", required=True, help="Directory of first sources")
    evaluate.add_argument("--b", required=True, help="Directory of second sources")
    evaluate.add_argument("--out", required=True, help="Report TSV path")
    evaluate.add_argument("--jobs", type=int, default=1, help="Evaluation threads")

    ablate = add("ablate", "Train and compare the component ablation variants")
    paths = ablate.add_argument_group("Paths")
    paths.add_argument("--data", required=True, help="Training manifest")
    paths.add_argument("--holdout", required=True, help="Holdout manifest for evaluation")
    paths.add_argument("--out", required=True, help="Output directory")
    paths.add_argument(
        "--variants",
        default=",".join(ABLATION_VARIANTS),
        help="Comma-separated variants to run",
    )
    _add_train_flags(ablate)
    _add_arch_flags(ablate)

    synth = add("synth", "Write synthetic aligned visible/infrared pairs")
    synth.add_argument("--out", required=True, help="Output directory (vis/ and ir/ are created)")
    synth.add_argument("--count", type=int, default=8, help="Number of pairs")
    synth.add_argument("--size", type=int, default=64, help="Image side in pixels")
    synth.add_argument("--seed", type=int, default=0, help="Scene seed")

    features = add("features", "Export intermediate feature maps of a pair as PNGs")
    features.add_argument("--ckpt", required=True, help="Trained checkpoint")
    features.add_argument("--a", required=True, help="First input")
    features.add_argument("--b", required=True, help="Second input")
    features.add_argument("--out", required=True, help="Output directory")
    features.add_argument("--n", type=int, default=4, help="Channels exported per map")

    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Config keys given on the command line."""
    return {k: v for k, v in vars(args).items() if k in CONFIG_TYPES}


def _run_config(args: argparse.Namespace) -> RunConfig:
    run = RunConfig.build(args.config_file, _overrides(args))
    threads = run.threads()
    if threads:
        torch.set_num_threads(threads)
        logger.debug(f"torch intra-op threads capped at {threads}")
    return run


def _training_progress(console: Console) -> Progress:
    return Progress(
        TextColumn("[bold blue]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TextColumn("loss {task.fields[loss]}"),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    )


def cmd_augment(args: argparse.Namespace, console: Console) -> int:
    """Build the joint dataset and print the manifest path."""
    run = _run_config(args)
    manifest = build_dataset(args.vis, args.ir, args.out, run.augment)
    console.print(f"[green]Manifest written:[/] {Path(args.out) / MANIFEST_NAME}")
    logger.debug(f"{len(manifest)} samples")
    return 0


def cmd_train(args: argparse.Namespace, console: Console) -> int:
    """Train on a manifest and write the final checkpoint and step log."""
    run = _run_config(args)
    config, arch = run.train, run.arch
    manifest = DatasetManifest.read(args.data)
    log_path = Path(args.log) if args.log else default_log_path(args.out)

    with _training_progress(console) as progress:
        task = progress.add_task("training", total=config.steps, loss="-")

        def on_step(report: StepReport) -> None:
            progress.update(task, advance=1, loss=f"{report.total:.4f}")

        result = train_loop(manifest, config, arch, args.out, log_path, on_step)

    console.print(
        Panel(
            f"Checkpoint: {args.out}\nStep log:   {log_path}\n"
            f"Final loss: {result.reports[-1].total:.6f}\n"
            f"Gates (MM, DP): {', '.join(f'{v:.4f}' for v in result.model.lambda_values())}",
            title="[bold green]Training finished[/]",
            border_style="green",
            expand=False,
        ),
    )
    return 0


def _load_model(args: argparse.Namespace) -> Any:
    model = load_checkpoint(args.ckpt)
    interaction = getattr(args, "interaction", None)
    if interaction is not None:
        model.interaction = Interaction(interaction)
    return model


def cmd_fuse(args: argparse.Namespace, console: Console) -> int:
    """Fuse a pair and write the result."""
    _run_config(args)
    model = _load_model(args)
    req = FusionRequest(load_image(args.a), load_image(args.b), ColorSource(args.color))
    save_image(fuse_pair(model, req), args.out)
    console.print(f"[green]Fused image written:[/] {args.out}")
    return 0


def cmd_enhance(args: argparse.Namespace, console: Console) -> int:
    """Enhance one image and write the result."""
    _run_config(args)
    model = _load_model(args)
    save_image(enhance_single(model, load_image(args.input)), args.out)
    console.print(f"[green]Enhanced image written:[/] {args.out}")
    return 0


def cmd_eval(args: argparse.Namespace, console: Console) -> int:
    """Evaluate a fused directory and write the metric report."""
    _run_config(args)
    report = evaluate_dir(args.fused, args.a, args.b, workers=args.jobs)
    report.write(args.out)

    mean = report.aggregate
    table = Table(title=f"Mean over {report.count} images")
    for name in METRIC_NAMES:
        table.add_column(name.upper(), justify="right")
    table.add_row(*(f"{v:.4f}" for v in mean.values()))
    console.print(table)
    console.print(f"[green]Report written:[/] {args.out}")
    return 0


def cmd_ablate(args: argparse.Namespace, console: Console) -> int:
    """Run the component ablation and write ablation.tsv."""
    run = _run_config(args)
    names = [v.strip() for v in args.variants.split(",") if v.strip()]
    unknown = [v for v in names if v not in ABLATION_VARIANTS]
    if unknown or not names:
        raise ConfigError(
            f"Unknown ablation variants: {', '.join(unknown) or '(none given)'}; "
            f"choose from {', '.join(ABLATION_VARIANTS)}",
        )
    variants = {name: ABLATION_VARIANTS[name] for name in names}
    config, arch = run.train, run.arch

    with _training_progress(console) as progress:
        tasks = {
            name: progress.add_task(name, total=config.steps, loss="-") for name in variants
        }

        def on_step(variant: str, report: StepReport) -> None:
            progress.update(tasks[variant], advance=1, loss=f"{report.total:.4f}")

        report = run_ablation(
            DatasetManifest.read(args.data),
            DatasetManifest.read(args.holdout),
            config,
            arch,
            variants,
            args.out,
            on_step,
        )

    table = Table(title="Ablation (holdout means)")
    table.add_column("variant")
    for name in METRIC_NAMES:
        table.add_column(name.upper(), justify="right")
    for row in report.rows:
        table.add_row(row.variant, *(f"{getattr(row, m):.4f}" for m in METRIC_NAMES))
    console.print(table)
    console.print(f"[green]Report written:[/] {Path(args.out) / ABLATION_FILE}")
    return 0


def cmd_synth(args: argparse.Namespace, console: Console) -> int:
    """Write synthetic visible/infrared pairs."""
    _run_config(args)
    vis_dir, ir_dir = make_synthetic_pairs(args.out, args.count, args.size, args.seed)
    console.print(f"[green]Synthetic pairs written:[/] {vis_dir} {ir_dir}")
    return 0


def cmd_features(args: argparse.Namespace, console: Console) -> int:
    """Export feature maps of a pair."""
    _run_config(args)
    model = _load_model(args)
    written = export_feature_maps(
        model,
        load_image(args.a),
        load_image(args.b),
        args.out,
        args.n,
    )
    console.print(f"[green]{len(written)} feature maps written to[/] {args.out}")
    return 0


COMMANDS: dict[str, Callable[[argparse.Namespace, Console], int]] = {
    "augment": cmd_augment,
    "train": cmd_train,
    "fuse": cmd_fuse,
    "enhance": cmd_enhance,
    "eval": cmd_eval,
    "ablate": cmd_ablate,
    "synth": cmd_synth,
    "features": cmd_features,
}


def main(argv: list[str] | None = None) -> int:
    """Run one command and return its exit code.

    Args:
        argv: Arguments without the program name; ``sys.argv[1:]`` when None

    Returns:
        0 on success, 1 on runtime failure, 2 on usage errors
    """
    console = Console()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    configure_logging(args.verbose)
    arguments = {k: v for k, v in vars(args).items() if k not in ("command", "verbose")}
    try:
        return COMMANDS[args.command](args, console)
    except GifnetError as e:
        logger.debug(f"{type(e).__name__}: {e}")
        display_error(console, e, args.command, arguments)
        return e.exit_code
    except OSError as e:
        display_error(console, e, args.command, arguments)
        return 1
    except Exception as e:
        logger.exception(f"Unexpected error in '{args.command}': {e}")
        return 1


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()

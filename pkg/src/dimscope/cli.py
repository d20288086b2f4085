"""Command-line surface: sampling, MST stats, both estimators, embeddings.

Every command accepts ``--config FILE`` with ``key=value`` lines mirroring
its flags (explicit flags win) and writes a ``<out>.manifest.json``
sidecar recording what produced each output.
"""

import sys
from pathlib import Path

import click
import numpy as np
from click.core import ParameterSource

from . import backend, brito, core, geometry, io, lsa, schweinhart
from .core import InvalidArgumentError
from .manifest import SCHEMA_VERSION, RunManifest

OBJECT_KINDS = {
    "unit-cube": ("manifold", "unit_cube"),
    "unit-sphere": ("manifold", "unit_sphere"),
    "unit-sphere-gaussian-mix": ("manifold", "unit_sphere_gaussian_mix"),
    "mobius-strip": ("manifold", "mobius_strip"),
    "swiss-roll": ("manifold", "swiss_roll"),
    "paraboloid": ("manifold", "paraboloid"),
    "sierpinski-triangle": ("fractal", "sierpinski_triangle"),
    "sierpinski-carpet": ("fractal", "sierpinski_carpet"),
    "menger-sponge": ("fractal", "menger_sponge"),
    "lognormal-cascade": ("cascade", None),
}


def _apply_config(ctx):
    """Fill non-command-line params from the key=value config file."""
    path = ctx.params.get("config")
    if not path:
        return ctx.params
    cfg = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise click.UsageError(f"bad config line (want key=value): {line!r}")
        cfg[key.strip().replace("-", "_")] = val.strip()
    by_name = {p.name: p for p in ctx.command.params}
    for name, raw in cfg.items():
        if name not in by_name:
            raise click.UsageError(f"unknown config key {name!r}")
        if ctx.get_parameter_source(name) != ParameterSource.COMMANDLINE:
            ctx.params[name] = by_name[name].type.convert(raw, by_name[name], ctx)
    return ctx.params


def _manifest(ctx, inputs=None):
    opts = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in ctx.params.items()
        if k != "config"
    }
    return RunManifest(ctx.command.name, opts, inputs)


config_option = click.option(
    "--config", type=click.Path(exists=True, dir_okay=False), default=None,
    help="key=value file mirroring the flags; flags win on conflict.",
)


@click.group()
@click.option(
    "--threads", type=int, default=None, envvar="DIMSCOPE_THREADS",
    help="Cap worker threads (default: DIMSCOPE_THREADS or all cores).",
)
def main(threads):
    """Intrinsic dimension estimation via Euclidean minimum spanning trees."""
    backend.set_threads(threads if threads is not None else backend.default_threads())


@main.command()
@click.option("--object", "object_name", required=True,
              type=click.Choice(sorted(OBJECT_KINDS)))
@click.option("--n", type=int, default=100000, show_default=True)
@click.option("--intrinsic-dim", type=int, default=None,
              help="Intrinsic dimension for cube/sphere families.")
@click.option("--d-target", type=int, default=None,
              help="Lift the cloud to this embedding dimension.")
@click.option("--noise-gauss", type=float, default=0.0, show_default=True,
              help="Gaussian noise sigma added per coordinate.")
@click.option("--noise-uniform-frac", type=float, default=0.0, show_default=True,
              help="Fraction of uniform background points to append.")
@click.option("--levels", type=int, default=17, show_default=True,
              help="Cascade levels J (lognormal-cascade only).")
@click.option("--log-sd", type=float, default=0.3, show_default=True)
@click.option("--log-mean", type=float, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "bin"]), default="csv",
              show_default=True)
@config_option
@click.pass_context
def sample(ctx, **kwargs):
    """Generate a synthetic point cloud (with optional lift and noise)."""
    p = _apply_config(ctx)
    man = _manifest(ctx)
    family, kind = OBJECT_KINDS[p["object_name"]]
    seed = p["seed"]
    if family == "manifold":
        spec = geometry.ManifoldSpec(kind, intrinsic_dim=p["intrinsic_dim"])
        cloud = geometry.sample_manifold(spec, p["n"], seed)
    elif family == "fractal":
        cloud = geometry.sample_ifs_fractal(geometry.FractalSpec(kind), p["n"], seed)
    else:
        spec = geometry.CascadeSpec(
            levels=p["levels"], log_sd=p["log_sd"], log_mean=p["log_mean"]
        )
        cloud = geometry.sample_lognormal_cascade(spec, seed)
    if p["d_target"] is not None:
        cloud = core.lift_dimension(cloud, p["d_target"])
    if p["noise_gauss"]:
        cloud = core.add_gaussian_noise(cloud, p["noise_gauss"], seed)
    if p["noise_uniform_frac"]:
        cloud = core.add_uniform_background(cloud, p["noise_uniform_frac"], seed)
    io.write_cloud(cloud, p["out"], p["fmt"])
    man.write_sidecar(p["out"])
    click.echo(f"wrote {cloud.n} x {cloud.d} cloud to {p['out']}")


@main.command("mst-stats")
@click.argument("cloud_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-edges", type=click.Path(dir_okay=False), default=None,
              help="Edge list CSV (u,v,weight).")
@click.option("--out-summary", type=click.Path(dir_okay=False), default=None,
              help="JSON summary (n, total weight, degree histogram).")
@config_option
@click.pass_context
def mst_stats(ctx, **kwargs):
    """Build the exact EMST of a cloud and export its statistics."""
    p = _apply_config(ctx)
    man = _manifest(ctx, {"cloud": p["cloud_file"]})
    from .mst import build_emst

    tree = build_emst(io.read_cloud(p["cloud_file"]))
    summary = io.tree_summary(tree)
    summary["schema_version"] = SCHEMA_VERSION
    summary["manifest_id"] = man.manifest_id
    if p["out_edges"]:
        io.write_tree_csv(tree, p["out_edges"])
        man.write_sidecar(p["out_edges"])
    if p["out_summary"]:
        io.write_json(summary, p["out_summary"])
        man.write_sidecar(p["out_summary"])
    click.echo(f"n={tree.n} total_weight={tree.total_weight():.6g}")


@main.command("schweinhart")
@click.argument("cloud_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--alpha-start", type=float, default=1e-4, show_default=True)
@click.option("--alpha-stop", type=float, default=10.0, show_default=True)
@click.option("--alpha-step", type=float, default=0.1, show_default=True)
@click.option("--gamma", type=float, default=0.1, show_default=True)
@click.option("--n-min", type=int, default=2000, show_default=True)
@click.option("--sizes", type=int, default=8, show_default=True,
              help="Number of subsample sizes in the geometric schedule.")
@click.option("--replicates", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--out-csv", type=click.Path(dir_okay=False), default=None)
@config_option
@click.pass_context
def schweinhart_cmd(ctx, **kwargs):
    """Alpha-sweep dimension estimates from MST edge-power growth."""
    p = _apply_config(ctx)
    man = _manifest(ctx, {"cloud": p["cloud_file"]})
    cloud = io.read_cloud(p["cloud_file"])
    sched = schweinhart.default_schedule(cloud.n, n_min=p["n_min"], count=p["sizes"])
    sched = schweinhart.SizeSchedule(sched.sizes, p["replicates"])
    report = schweinhart.sweep_alpha(
        cloud,
        {"start": p["alpha_start"], "stop": p["alpha_stop"], "step": p["alpha_step"]},
        sched,
        gamma=p["gamma"],
        seed=p["seed"],
    )
    doc = report.to_dict()
    doc["schema_version"] = SCHEMA_VERSION
    doc["manifest_id"] = man.manifest_id
    doc["admissible"] = doc["admissible_alpha"]
    io.write_json(doc, p["out"])
    man.write_sidecar(p["out"])
    if p["out_csv"]:
        _write_report_csv(report, p["out_csv"])
        man.write_sidecar(p["out_csv"])
    if report.d_min is None:
        click.echo("no admissible alpha")
    else:
        click.echo(f"d_min={report.d_min:.4g} d_max={report.d_max:.4g}")


def _write_report_csv(report, path):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("alpha,d_hat,ci_low,ci_high,admissible\n")
        for r in report.records:
            def cell(v):
                return "" if v is None else format(v, ".17g")

            fh.write(
                f"{cell(r.alpha)},{cell(r.d_hat)},{cell(r.ci_low)},"
                f"{cell(r.ci_high)},{str(r.admissible).lower()}\n"
            )


def _parse_dims(spec_str: str):
    if ".." in spec_str:
        lo, hi = spec_str.split("..")
        return range(int(lo), int(hi) + 1)
    return [int(s) for s in spec_str.split(",")]


@main.command("brito-calibrate")
@click.option("--dims", default="2..15", show_default=True,
              help="Candidate dimensions, 'lo..hi' or comma list.")
@click.option("--n-cal", type=int, default=2000, show_default=True)
@click.option("--l", "l_samples", type=int, default=100, show_default=True,
              help="Calibration samples per dimension.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@config_option
@click.pass_context
def brito_calibrate(ctx, **kwargs):
    """Monte-Carlo hypercube calibration for the degree-statistic estimator."""
    p = _apply_config(ctx)
    man = _manifest(ctx)
    calib = brito.calibrate(
        dims=_parse_dims(p["dims"]), n_cal=p["n_cal"], L=p["l_samples"], seed=p["seed"]
    )
    doc = calib.to_dict()
    doc["schema_version"] = SCHEMA_VERSION
    doc["manifest_id"] = man.manifest_id
    io.write_json(doc, p["out"])
    man.write_sidecar(p["out"])
    click.echo(f"calibrated dims {calib.dims[0]}..{calib.dims[-1]} at n={calib.n_cal}")


@main.command("brito")
@click.argument("cloud_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--calib", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--sizes", default=None,
              help="Comma list of subsample sizes for a convergence curve.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--out-csv", type=click.Path(dir_okay=False), default=None,
              help="Convergence curve CSV (size,expected_dim,d_bqy).")
@config_option
@click.pass_context
def brito_cmd(ctx, **kwargs):
    """Bayesian integer-dimension estimate from the MST degree statistic."""
    p = _apply_config(ctx)
    man = _manifest(ctx, {"cloud": p["cloud_file"], "calib": p["calib"]})
    calib_doc = io.read_json(p["calib"])
    try:
        calib = brito.BritoCalibration.from_dict(calib_doc)
    except (KeyError, InvalidArgumentError) as exc:
        raise click.ClickException(f"bad calibration file {p['calib']}: {exc}") from exc
    cloud = io.read_cloud(p["cloud_file"])
    try:
        est = brito.estimate(cloud, calib)
    except brito.PosteriorUnderflowError as exc:
        raise click.ClickException(str(exc)) from exc
    doc = est.to_dict()
    doc["schema_version"] = SCHEMA_VERSION
    doc["manifest_id"] = man.manifest_id
    curve = None
    if p["sizes"]:
        sizes = sorted(int(s) for s in p["sizes"].split(","))
        sched = schweinhart.SizeSchedule(tuple(sizes), replicates=1)
        curve = brito.convergence_curve(cloud, sched, calib, seed=p["seed"])
        doc["curve"] = [
            {"size": s, "expected_dim": e, "d_bqy": d} for s, e, d in curve
        ]
    io.write_json(doc, p["out"])
    man.write_sidecar(p["out"])
    if p["out_csv"] and curve is not None:
        with Path(p["out_csv"]).open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("size,expected_dim,d_bqy\n")
            for s, e, d in curve:
                fh.write(f"{s},{format(e, '.17g')},{d}\n")
        man.write_sidecar(p["out_csv"])
    click.echo(f"d_bqy={est.d_bqy} expected={est.expected_dim:.4g}")


@main.command("embed")
@click.argument("corpus_path", type=click.Path(exists=True))
@click.option("--stopwords", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--d", "dim", type=int, default=15, show_default=True)
@click.option("--truncate", type=int, default=None,
              help="Truncate the table to this dimension after SVD.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@config_option
@click.pass_context
def embed(ctx, **kwargs):
    """Entropy-weighted LSA embeddings of a pre-tokenized corpus."""
    p = _apply_config(ctx)
    stop = lsa.load_stopwords(p["stopwords"]) if p["stopwords"] else set()
    corpus = lsa.load_corpus(p["corpus_path"], stop)
    if corpus.M == 0:
        raise click.ClickException("empty vocabulary after stopword removal")
    counts = lsa.count_matrix(corpus)
    w = lsa.weight_matrix(counts, lsa.entropy_weights(counts))
    table, _ = lsa.truncated_svd(w, p["dim"], vocabulary=corpus.vocabulary)
    if p["truncate"] is not None:
        table = lsa.truncate_embeddings(table, p["truncate"])
    man = _manifest(ctx)
    lsa.write_embedding_table(table, p["out"])
    man.write_sidecar(p["out"])
    click.echo(f"embedded {len(table.tokens)} tokens at d={table.d}")


@main.command("ngrams")
@click.argument("corpus_path", type=click.Path(exists=True))
@click.option("--table", "table_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--n", type=int, default=2, show_default=True)
@click.option("--stopwords", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "bin"]), default="csv",
              show_default=True)
@config_option
@click.pass_context
def ngrams(ctx, **kwargs):
    """Concatenate word embeddings into a unique-n-gram point cloud."""
    p = _apply_config(ctx)
    man = _manifest(ctx, {"table": p["table_path"]})
    stop = lsa.load_stopwords(p["stopwords"]) if p["stopwords"] else set()
    corpus = lsa.load_corpus(p["corpus_path"], stop)
    table = lsa.read_embedding_table(p["table_path"])
    gram_table = lsa.ngram_embeddings(corpus, table, p["n"])
    if gram_table.oov_skipped:
        click.echo(f"skipped {gram_table.oov_skipped} out-of-vocabulary n-grams",
                   err=True)
    io.write_cloud(gram_table.as_cloud(), p["out"], p["fmt"])
    man.write_sidecar(p["out"])
    click.echo(
        f"wrote {len(gram_table.tokens)} {p['n']}-gram vectors of dim {gram_table.d}"
    )


def run():  # pragma: no cover
    try:
        main()
    except InvalidArgumentError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    run()

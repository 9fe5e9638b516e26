"""Report envelope plus its JSON, CSV and SVG renderings."""
import logging
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from cheshire.constants import tolerances  # noqa: E402
from cheshire.schemas import (  # noqa: E402
    ExperimentConfig,
    FluxProfile,
    MomentumSweepTable,
    ReportEnvelope,
    SurvivalTable,
)

logger = logging.getLogger("cheshire.report")


def build_envelope(command: str, config: ExperimentConfig | None, results, timings: dict[str, float]) -> ReportEnvelope:
    return ReportEnvelope(
        command=command,
        config={} if config is None else config.model_dump(mode="json"),
        results=results,
        timings=timings,
        tolerances=tolerances(),
    )


def to_json(envelope: ReportEnvelope) -> str:
    return envelope.model_dump_json(indent=2)


def from_json(text: str) -> ReportEnvelope:
    return ReportEnvelope.model_validate_json(text)


def _flatten(record: dict) -> dict:
    """Turn {name: {value, unit}} into {"name [unit]": value}; plain values pass through."""
    row = {}
    for key, item in record.items():
        if key in ("config", "kind"):
            continue
        if isinstance(item, dict) and set(item) == {"value", "unit"}:
            row[f"{key} [{item['unit']}]"] = item["value"]
        elif not isinstance(item, (dict, list)):
            row[key] = item
    return row


def results_frame(results) -> pd.DataFrame:
    if isinstance(results, FluxProfile):
        return pd.DataFrame(
            {
                "n": results.wall_indices,
                "per_period [hbar]": results.per_period.values,
                "analytic [hbar]": results.analytic.values,
                "finite_epsilon [hbar]": results.finite_epsilon.values,
                "prob_left [probability]": results.prob_left.values,
                "prob_spin_given_left [probability]": results.prob_spin_given_left.values,
            }
        )
    if isinstance(results, (SurvivalTable, MomentumSweepTable)):
        return pd.DataFrame([_flatten(row.model_dump()) for row in results.rows])
    return pd.DataFrame([_flatten(results.model_dump())])


def to_csv(envelope: ReportEnvelope) -> str:
    return results_frame(envelope.results).to_csv(index=False)


def _save(fig, path: pathlib.Path, title: str, table: pd.DataFrame):
    fig.savefig(path, format="svg", metadata={"Title": title, "Description": table.to_csv(index=False)})
    plt.close(fig)
    logger.info(f"Wrote plot {path}")


def write_svg(envelope: ReportEnvelope, path: pathlib.Path | str):
    path = pathlib.Path(path)
    results = envelope.results
    table = results_frame(results)
    fig, ax = plt.subplots(figsize=(7, 4.5))

    if isinstance(results, FluxProfile):
        ax.plot(results.wall_indices, results.per_period.values, "o", ms=4, label="simulated")
        ax.plot(results.wall_indices, results.analytic.values, "-", label="half-sine")
        ax.plot(results.wall_indices, results.finite_epsilon.values, "--", label="finite epsilon")
        ax.set_xlabel("wall index n")
        ax.set_ylabel(r"$\Delta\langle L_x \rangle_n$ [$\hbar$]")
        ax.set_title(f"Per-period flux, N = {results.n_rounds}, total {results.total.value:+.4f}")
        title = "flux profile"
    elif isinstance(results, SurvivalTable):
        n = [row.n_rounds for row in results.rows]
        ax.plot(n, [row.survival.value for row in results.rows], "o-", label="simulated")
        ax.plot(n, [row.survival_analytic.value for row in results.rows], "--", label=r"$\cos^{4N}(\pi/2N)$")
        ax.set_xscale("log")
        ax.set_xlabel("N")
        ax.set_ylabel("P(Left)")
        ax.set_title("Left survival against N")
        title = "survival ladder"
    elif isinstance(results, MomentumSweepTable):
        dtheta = [row.delta_theta.value for row in results.rows]
        ax.loglog(dtheta, [abs(row.p_transfer.value) for row in results.rows], "o-", label="simulated")
        ax.loglog(dtheta, [abs(row.p_transfer_analytic.value) for row in results.rows], "--", label="analytic")
        ax.set_xlabel(r"$\Delta\theta$ [rad]")
        ax.set_ylabel("momentum received [p0 units]")
        ax.set_title(f"Linear momentum transfer ({results.reflection_count_mode})")
        title = "momentum sweep"
    else:
        plt.close(fig)
        raise ValueError(f"No plot is defined for {results.kind} results")

    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, path, title, table)

"""
Experiment Service for RZF-SKETCH

Seeded experiment harness: sampling-scheme comparison, SNR sweep,
convergence traces, sum-rate convergence and the timing benchmark.
Every trial owns a Philox stream derived from the master seed, and every
output row carries that trial's seed.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import orjson
import pandas as pd

from .. import __version__
from ..exceptions import ExperimentError, TrialFailedError
from ..models.channel_model import ChannelConfig
from ..models.embedding_model import RealEmbedding
from ..models.experiment_model import ExperimentConfig, RidgeLambdaSource, Scenario
from ..models.sketch_model import SamplingProbabilities, SamplingScheme, SketchMatrix
from ..utils.helpers import get_system_info, metadata_path, relative_error, summary_path
from ..utils.logging_config import log_performance, log_run_event
from ..utils.random_streams import BIT_GENERATOR, make_rng, trial_seeds
from .channel_service import ChannelService
from .metrics_service import MetricsService
from .realify_service import RealifyService
from .rzf_service import RZFService
from .sketch_service import SketchService
from .solver_service import SolverService

SNR_CONVENTION = "P/sigma2"
FLOAT_FORMAT = "%.17g"

# stream slots below a trial seed
CHANNEL_STREAM = 0
SKETCH_STREAM = 1

# shortest timed sample; faster calls are repeated inside one sample
MIN_SAMPLE_SECONDS = 2e-3

SORT_KEYS: Dict[Scenario, List[str]] = {
    Scenario.SAMPLING_COMPARE: ["trial", "scheme", "L"],
    Scenario.SNR_SWEEP: ["trial", "snr_db", "scheme", "L"],
    Scenario.CONVERGENCE: ["trial", "scheme", "L", "iteration"],
    Scenario.SUMRATE_CONVERGENCE: ["trial", "scheme", "L", "iteration"],
    Scenario.BENCH: ["trial", "M", "L"],
}

GROUP_KEYS: Dict[Scenario, List[str]] = {
    Scenario.SAMPLING_COMPARE: ["scheme", "L"],
    Scenario.SNR_SWEEP: ["snr_db", "scheme", "L"],
    Scenario.CONVERGENCE: ["scheme", "L", "iteration"],
    Scenario.SUMRATE_CONVERGENCE: ["scheme", "L", "iteration"],
    Scenario.BENCH: ["M", "L"],
}

SUMMARY_EXCLUDE = {"trial", "trial_seed", "K", "t", "P"}


class TrialContext:
    """Channel, embedding and exact solution shared by all sweep points of one trial."""

    def __init__(
        self,
        H,
        emb: RealEmbedding,
        exact_real: np.ndarray,
        exact: np.ndarray,
        profile,
        sigma2: float,
        P: float,
        ridge_lambda: float,
    ):
        self.H = H
        self.emb = emb
        self.exact_real = exact_real
        self.exact = exact
        self.profile = profile
        self.sigma2 = sigma2
        self.P = P
        self.ridge_lambda = ridge_lambda


class ExperimentService:
    """
    Service running the experiment scenarios.

    Results come back as pandas DataFrames with one row per
    (trial, sweep point); ``write_results`` persists them.
    """

    def __init__(self):
        """Initialize the experiment service and the services it drives."""
        self.logger = logging.getLogger(__name__)
        self.channels = ChannelService()
        self.realify = RealifyService()
        self.rzf = RZFService()
        self.sketches = SketchService()
        self.solver = SolverService()
        self.metrics = MetricsService()

    # ------------------------------------------------------------------
    # Dispatch
    # ------------------------------------------------------------------

    def run(self, cfg: ExperimentConfig) -> pd.DataFrame:
        """Run the scenario named by ``cfg.scenario``."""
        runners: Dict[Scenario, Callable[[ExperimentConfig], pd.DataFrame]] = {
            Scenario.SAMPLING_COMPARE: self.run_sampling_compare,
            Scenario.SNR_SWEEP: self.run_snr_sweep,
            Scenario.CONVERGENCE: self.run_convergence,
            Scenario.SUMRATE_CONVERGENCE: self.run_sumrate_convergence,
            Scenario.BENCH: self.run_bench,
        }
        return runners[cfg.scenario](cfg)

    # ------------------------------------------------------------------
    # Scenarios
    # ------------------------------------------------------------------

    @log_performance
    def run_sampling_compare(self, cfg: ExperimentConfig) -> pd.DataFrame:
        """
        Relative solution error and sum-rate error after t iterations for
        every (scheme, L), one row per trial.
        """
        return self._run_trials(cfg, self._sampling_compare_trial)

    @log_performance
    def run_snr_sweep(self, cfg: ExperimentConfig) -> pd.DataFrame:
        """Per-user rate of sketched and exact RZF over the SNR grid (P = sigma^2 10^(snr/10))."""
        return self._run_trials(cfg, self._snr_sweep_trial)

    @log_performance
    def run_convergence(self, cfg: ExperimentConfig) -> pd.DataFrame:
        """Solution and sum-rate error per iteration with the error bounds alongside."""
        return self._run_trials(cfg, self._convergence_trial)

    @log_performance
    def run_sumrate_convergence(self, cfg: ExperimentConfig) -> pd.DataFrame:
        """Sum-rate error per iteration against the eta-tail, literal-eta and approx-R bounds."""
        return self._run_trials(cfg, self._sumrate_convergence_trial)

    @log_performance
    def run_bench(self, cfg: ExperimentConfig) -> pd.DataFrame:
        """
        Wall-clock comparison of the exact real solve and factorize + iterate.

        One untimed warmup pass precedes the timed repetitions; medians are reported.
        """
        seed = trial_seeds(cfg.master_seed, 1)[0]
        log_run_event("experiment started", event="start", scenario=cfg.scenario.value,
                      master_seed=cfg.master_seed, trials=1)
        rows: List[Dict[str, Any]] = []
        for m_index, M in enumerate(cfg.antenna_sweep):
            channel_cfg = cfg.channel.model_copy(update={"M": M})
            context = self._trial_context(channel_cfg, seed, cfg, P=channel_cfg.transmit_power,
                                          stream=(CHANNEL_STREAM, m_index))
            emb = context.emb
            probs = self.sketches.uniform_probs(2 * M)
            exact_time = self._median_time(
                lambda: self.rzf.solve_exact_real(emb), cfg.bench_repeats, cfg.bench_warmup
            )
            for l_index, L in enumerate(cfg.sketch_sizes):
                rng = make_rng(seed, SKETCH_STREAM, m_index, l_index)
                S = self.sketches.draw_sketch(probs, L, rng)
                product_time = self._median_time(
                    lambda: self.solver.sketch_product(emb.Q, S), cfg.bench_repeats,
                    cfg.bench_warmup,
                )
                QS = self.solver.sketch_product(emb.Q, S)
                factorize_time = self._median_time(
                    lambda: self.solver.factorize_product(QS, emb.lam), cfg.bench_repeats,
                    cfg.bench_warmup,
                )
                preconditioner = self.solver.factorize_product(QS, emb.lam)
                post_product_time = self._median_time(
                    lambda: self._preconditioner_work(QS, emb, cfg.iterations),
                    cfg.bench_repeats,
                    cfg.bench_warmup,
                )
                iterate_time = self._median_time(
                    lambda: self.solver.iterate(
                        emb, S, cfg.iterations, preconditioner=preconditioner,
                        verify_recurrence=False, keep_iterates=False,
                    ),
                    cfg.bench_repeats,
                    cfg.bench_warmup,
                )
                sketched_time = product_time + factorize_time + iterate_time
                rows.append(
                    {
                        "trial": 0,
                        "trial_seed": seed,
                        "M": M,
                        "K": channel_cfg.K,
                        "L": L,
                        "t": cfg.iterations,
                        "exact_time": exact_time,
                        "product_time": product_time,
                        "factorize_time": factorize_time,
                        "iterate_time": iterate_time,
                        "post_product_time": post_product_time,
                        "sketched_time": sketched_time,
                        "speedup_ratio": exact_time / sketched_time if sketched_time else np.nan,
                    }
                )
                self.logger.info(
                    "bench M=%d L=%d exact=%.3es sketched=%.3es", M, L, exact_time, sketched_time
                )
        log_run_event("experiment finished", event="finish", scenario=cfg.scenario.value,
                      rows=len(rows))
        return self._finalize(pd.DataFrame(rows), cfg.scenario)

    # ------------------------------------------------------------------
    # Trials
    # ------------------------------------------------------------------

    def _sampling_compare_trial(
        self, cfg: ExperimentConfig, trial: int, seed: int
    ) -> List[Dict[str, Any]]:
        context = self._trial_context(cfg.channel, seed, cfg)
        normalized_exact = self.rzf.power_normalize(context.exact, context.P)
        exact_rate = self.metrics.sum_rate(context.H, normalized_exact, context.sigma2).sum_rate
        oracle_gap = np.nan
        if context.emb.Q.shape[1] <= cfg.primal_cap:
            primal = RZFService(primal_cap=cfg.primal_cap).solve_exact_primal(context.emb)
            oracle_gap = relative_error(primal, context.exact_real)
        d_lambda = self.sketches.degrees_of_freedom(context.profile, context.ridge_lambda)
        # quality targets that make the solution-error bounds hold at accuracy epsilon
        min_leverage = self.sketches.min_samples_leverage(
            context.H.K, cfg.epsilon / 2.0, cfg.delta
        )
        min_ridge = self.sketches.min_samples_ridge(
            d_lambda, cfg.epsilon / (4.0 * math.sqrt(2.0)), cfg.delta
        )
        rows = []
        for s_index, scheme in enumerate(cfg.schemes):
            probs = self._probabilities(cfg, context, scheme)
            for l_index, L in enumerate(cfg.sketch_sizes):
                S = self._sketch(cfg, probs, L, make_rng(seed, SKETCH_STREAM, s_index, l_index))
                trace = self.solver.iterate(
                    context.emb, S, cfg.iterations, exact=context.exact_real,
                    early_stop_tol=cfg.early_stop_tol, verify_recurrence=False,
                    keep_iterates=False,
                )
                approx = trace.solution
                approx_rate = self.metrics.sum_rate(
                    context.H, self.rzf.power_normalize(approx, context.P), context.sigma2
                ).sum_rate
                record = trace.records[-1] if trace.records else None
                rows.append(
                    {
                        "trial": trial,
                        "trial_seed": seed,
                        "scheme": scheme.value,
                        "L": L,
                        "t": cfg.iterations,
                        "iterations_run": trace.iterations,
                        "relative_error": relative_error(approx, context.exact),
                        "solution_error": self.metrics.solution_error(approx, context.exact),
                        "sum_rate_error": abs(approx_rate - exact_rate),
                        "residual_norm": record.residual_norm if record else 0.0,
                        "sketch_quality": self.sketches.sketch_quality(context.profile, S),
                        "ridge_sketch_quality": self.sketches.ridge_sketch_quality(
                            context.profile, S, context.emb.lam
                        ),
                        "d_lambda": d_lambda,
                        "min_samples_leverage": min_leverage,
                        "min_samples_ridge": min_ridge,
                        "oracle_gap": oracle_gap,
                    }
                )
        return rows

    def _snr_sweep_trial(
        self, cfg: ExperimentConfig, trial: int, seed: int
    ) -> List[Dict[str, Any]]:
        sigma2 = cfg.channel.noise_power
        H = self.channels.generate_channel(cfg.channel, make_rng(seed, CHANNEL_STREAM))
        rows = []
        for snr_index, snr_db in enumerate(cfg.snr_grid_db):
            P = sigma2 * 10.0 ** (snr_db / 10.0)
            context = self._context_for_channel(H, cfg, sigma2, P)
            exact_rate = self.metrics.sum_rate(
                H, self.rzf.power_normalize(context.exact, P), sigma2
            ).per_user_rate
            for s_index, scheme in enumerate(cfg.schemes):
                probs = self._probabilities(cfg, context, scheme)
                for l_index, L in enumerate(cfg.sketch_sizes):
                    rng = make_rng(seed, SKETCH_STREAM, snr_index, s_index, l_index)
                    S = self._sketch(cfg, probs, L, rng)
                    approx = self.solver.iterate(
                        context.emb, S, cfg.iterations, early_stop_tol=cfg.early_stop_tol,
                        verify_recurrence=False, keep_iterates=False,
                    ).solution
                    sketch_rate = self.metrics.sum_rate(
                        H, self.rzf.power_normalize(approx, P), sigma2
                    ).per_user_rate
                    rows.append(
                        {
                            "trial": trial,
                            "trial_seed": seed,
                            "snr_db": float(snr_db),
                            "P": P,
                            "scheme": scheme.value,
                            "L": L,
                            "t": cfg.iterations,
                            "per_user_rate_sketch": sketch_rate,
                            "per_user_rate_exact": exact_rate,
                            "rate_gap": exact_rate - sketch_rate,
                        }
                    )
        return rows

    def _convergence_trial(
        self, cfg: ExperimentConfig, trial: int, seed: int
    ) -> List[Dict[str, Any]]:
        return self._iteration_rows(cfg, trial, seed, sum_rate_view=False)

    def _sumrate_convergence_trial(
        self, cfg: ExperimentConfig, trial: int, seed: int
    ) -> List[Dict[str, Any]]:
        return self._iteration_rows(cfg, trial, seed, sum_rate_view=True)

    def _iteration_rows(
        self, cfg: ExperimentConfig, trial: int, seed: int, sum_rate_view: bool
    ) -> List[Dict[str, Any]]:
        """
        Per-iteration rows with beta = 1 beamformers sharing one right-hand side.
        """
        context = self._trial_context(cfg.channel, seed, cfg)
        H, exact, sigma2 = context.H, context.exact, context.sigma2
        exact_rate = self.metrics.sum_rate(H, exact, sigma2).sum_rate
        rows = []
        for s_index, scheme in enumerate(cfg.schemes):
            probs = self._probabilities(cfg, context, scheme)
            for l_index, L in enumerate(cfg.sketch_sizes):
                S = self._sketch(cfg, probs, L, make_rng(seed, SKETCH_STREAM, s_index, l_index))
                trace = self.solver.iterate(
                    context.emb, S, cfg.iterations, exact=context.exact_real,
                    early_stop_tol=cfg.early_stop_tol,
                )
                quality = self.sketches.sketch_quality(context.profile, S)
                ridge_quality = self.sketches.ridge_sketch_quality(
                    context.profile, S, context.emb.lam
                )
                bounds = self.metrics.bound_report(
                    H, exact, sigma2, context.emb.lam, context.emb.Lambda, context.profile,
                    quality, ridge_quality, trace.iterations,
                )
                C = bounds.C
                for record, partial in zip(trace.records, trace.partial_sums):
                    j = record.iteration
                    approx = self.realify.lift(partial)
                    rate_error = abs(self.metrics.sum_rate(H, approx, sigma2).sum_rate
                                     - exact_rate)
                    row: Dict[str, Any] = {
                        "trial": trial,
                        "trial_seed": seed,
                        "scheme": scheme.value,
                        "L": L,
                        "iteration": j,
                        "sum_rate_error": rate_error,
                        "epsilon": bounds.epsilon_effective,
                        "hypothesis_holds": bool(bounds.epsilon_effective < 1.0),
                        "corollary_bound": bounds.corollary_rhs[j],
                        "corollary_literal_bound": bounds.corollary_literal_rhs[j],
                        "C": C,
                        "eta": bounds.eta,
                        "eta_literal": bounds.eta_literal,
                    }
                    if sum_rate_view:
                        row["relative_sum_rate_error"] = (
                            rate_error / exact_rate if exact_rate > 0 else rate_error
                        )
                        row["approx_r_bound"] = self.metrics.thm_approx_R_bound(
                            H, approx, exact, C
                        )
                    else:
                        row.update(
                            {
                                "solution_error": record.error,
                                "relative_error": record.relative_error,
                                "residual_norm": record.residual_norm,
                                "recurrence_gap": record.recurrence_gap,
                                "epsilon_ridge": bounds.epsilon_ridge,
                                "ridge_hypothesis_holds": bool(bounds.epsilon_ridge < 1.0),
                                "thm1_bound": bounds.thm1_rhs[j],
                                "thm2_bound": bounds.thm2_rhs[j],
                                "xi": bounds.xi,
                            }
                        )
                    rows.append(row)
        return rows

    # ------------------------------------------------------------------
    # Building blocks
    # ------------------------------------------------------------------

    def _trial_context(
        self,
        channel_cfg: ChannelConfig,
        seed: int,
        cfg: ExperimentConfig,
        P: Optional[float] = None,
        stream: Tuple[int, ...] = (CHANNEL_STREAM,),
    ) -> TrialContext:
        H = self.channels.generate_channel(channel_cfg, make_rng(seed, *stream))
        P = channel_cfg.transmit_power if P is None else P
        return self._context_for_channel(H, cfg, channel_cfg.noise_power, P)

    def _context_for_channel(
        self, H, cfg: ExperimentConfig, sigma2: float, P: float
    ) -> TrialContext:
        lam = self.rzf.ridge_parameter(P, H.K, sigma2)
        emb = self.realify.embed(H, lam, beta=1.0)
        profile = self.sketches.spectral_profile(emb.Q)
        exact_real = self.rzf.solve_exact_real(emb)
        if cfg.ridge_lambda_source is RidgeLambdaSource.RANK:
            ridge_lambda = self.sketches.ridge_param_from_rank(emb.Q, cfg.ridge_rank, profile)
        else:
            ridge_lambda = lam
        return TrialContext(
            H=H,
            emb=emb,
            exact_real=exact_real,
            exact=self.realify.lift(exact_real),
            profile=profile,
            sigma2=sigma2,
            P=P,
            ridge_lambda=ridge_lambda,
        )

    def _probabilities(
        self, cfg: ExperimentConfig, context: TrialContext, scheme: SamplingScheme
    ) -> SamplingProbabilities:
        return self.sketches.sampling_probabilities(
            scheme, context.profile, context.ridge_lambda, cfg.leverage_normalization
        )

    def _sketch(
        self,
        cfg: ExperimentConfig,
        probs: SamplingProbabilities,
        L: int,
        rng: np.random.Generator,
    ) -> SketchMatrix:
        if cfg.identity_when_full and L == probs.n:
            return self.sketches.identity_sketch(L)
        return self.sketches.draw_sketch(probs, L, rng)

    def _preconditioner_work(self, QS: np.ndarray, emb: RealEmbedding, t: int) -> np.ndarray:
        # the part of t iterations that never touches Q: factorize once, t solves
        preconditioner = self.solver.factorize_product(QS, emb.lam)
        residual = emb.Lambda
        for _ in range(t):
            residual = self.solver.apply_inverse(preconditioner, residual)
        return residual

    @staticmethod
    def _median_time(func: Callable[[], Any], repeats: int, warmup: int) -> float:
        """Median per-call seconds over ``repeats`` samples of ``number`` calls each."""
        for _ in range(warmup):
            func()
        number = 1
        while True:
            start = time.perf_counter()
            for _ in range(number):
                func()
            if time.perf_counter() - start >= MIN_SAMPLE_SECONDS or number >= 1024:
                break
            number *= 2
        timings = []
        for _ in range(repeats):
            start = time.perf_counter()
            for _ in range(number):
                func()
            timings.append((time.perf_counter() - start) / number)
        return float(np.median(timings))

    def _run_trials(
        self,
        cfg: ExperimentConfig,
        trial_fn: Callable[[ExperimentConfig, int, int], List[Dict[str, Any]]],
    ) -> pd.DataFrame:
        seeds = trial_seeds(cfg.master_seed, cfg.trials)
        scenario = cfg.scenario.value
        log_run_event("experiment started", event="start", scenario=scenario,
                      master_seed=cfg.master_seed, trials=cfg.trials)

        def run_one(item: Tuple[int, int]) -> List[Dict[str, Any]]:
            trial, seed = item
            try:
                return trial_fn(cfg, trial, seed)
            except Exception as e:
                log_run_event("trial failed", event="trial_failed", scenario=scenario,
                              trial=trial, trial_seed=seed, error=str(e))
                raise TrialFailedError(
                    f"{type(e).__name__}: {e}", scenario=scenario, trial=trial, seed=seed
                ) from e

        items = list(enumerate(seeds))
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(run_one, items))
        else:
            results = [run_one(item) for item in items]

        rows = [row for trial_rows in results for row in trial_rows]
        log_run_event("experiment finished", event="finish", scenario=scenario, rows=len(rows))
        return self._finalize(pd.DataFrame(rows), cfg.scenario)

    @staticmethod
    def _finalize(frame: pd.DataFrame, scenario: Scenario) -> pd.DataFrame:
        if frame.empty:
            raise ExperimentError(f"scenario {scenario.value} produced no rows")
        keys = [key for key in SORT_KEYS[scenario] if key in frame.columns]
        return frame.sort_values(keys, kind="mergesort").reset_index(drop=True)

    # ------------------------------------------------------------------
    # Aggregation and output
    # ------------------------------------------------------------------

    def summarize(self, frame: pd.DataFrame, scenario: Union[Scenario, str]) -> pd.DataFrame:
        """
        Mean and median of every metric per sweep point.

        Returns:
            One row per sweep point with ``<metric>_mean`` and ``<metric>_median`` columns
        """
        scenario = Scenario(scenario)
        keys = GROUP_KEYS[scenario]
        metrics = [
            column
            for column in frame.columns
            if column not in keys
            and column not in SUMMARY_EXCLUDE
            and pd.api.types.is_numeric_dtype(frame[column])
            and not pd.api.types.is_bool_dtype(frame[column])
        ]
        grouped = frame.groupby(keys, sort=True)[metrics]
        summary = grouped.agg(["mean", "median"])
        summary.columns = [f"{metric}_{stat}" for metric, stat in summary.columns]
        summary = summary.reset_index()
        summary.insert(len(keys), "trials", grouped.size().to_numpy())
        return summary

    def convergence_fit(
        self,
        frame: pd.DataFrame,
        column: str = "relative_error",
        floor: float = 1e-12,
    ) -> pd.DataFrame:
        """
        Least-squares fit of log10(median error) against iteration per (scheme, L).

        Iterations whose median error is at or below ``floor`` are left out.

        Returns:
            Frame with slope, intercept, r_squared and points per (scheme, L)
        """
        medians = frame.groupby(["scheme", "L", "iteration"], sort=True)[column].median()
        fits = []
        for (scheme, L), series in medians.groupby(level=["scheme", "L"], sort=True):
            values = series.to_numpy(dtype=np.float64)
            iterations = series.index.get_level_values("iteration").to_numpy(dtype=np.float64)
            mask = values > floor
            slope = intercept = r_squared = np.nan
            if np.count_nonzero(mask) >= 2:
                x, y = iterations[mask], np.log10(values[mask])
                slope, intercept = np.polyfit(x, y, 1)
                fitted = slope * x + intercept
                total = float(np.sum((y - y.mean()) ** 2))
                r_squared = 1.0 - float(np.sum((y - fitted) ** 2)) / total if total > 0 else 1.0
            fits.append(
                {
                    "scheme": scheme,
                    "L": int(L),
                    "slope": float(slope),
                    "intercept": float(intercept),
                    "r_squared": float(r_squared),
                    "points": int(np.count_nonzero(mask)),
                }
            )
        return pd.DataFrame(fits)

    def bench_scaling(self, frame: pd.DataFrame) -> pd.DataFrame:
        """
        Growth of the exact and sketched times across the antenna sweep.

        ``exact_pass`` requires at least 1.5x exact-solve growth per step.
        ``iterate_pass`` requires the post-product time (factorization of QS
        plus the t preconditioner solves) to stay within 1.5x of its smallest
        value over the whole sweep. ``iterate_spread`` reports the same ratio
        for the full iterate, whose products with Q grow with M.
        """
        rows = []
        for L, group in frame.groupby("L", sort=True):
            group = group.sort_values("M")
            exact = group["exact_time"].to_numpy()
            growth = exact[1:] / exact[:-1] if exact.size > 1 else np.array([])
            spreads = {
                column: self._spread(group[column].to_numpy())
                for column in ("factorize_time", "post_product_time", "iterate_time")
            }
            rows.append(
                {
                    "L": int(L),
                    "antennas": "/".join(str(m) for m in group["M"]),
                    "exact_growth_min": float(growth.min()) if growth.size else np.nan,
                    "post_product_spread": spreads["post_product_time"],
                    "iterate_spread": spreads["iterate_time"],
                    "factorize_spread": spreads["factorize_time"],
                    "exact_pass": bool(growth.size and growth.min() >= 1.5),
                    "iterate_pass": bool(spreads["post_product_time"] <= 1.5),
                }
            )
        return pd.DataFrame(rows)

    @staticmethod
    def _spread(times: np.ndarray) -> float:
        return float(times.max() / times.min()) if times.min() > 0 else np.nan

    def write_results(
        self,
        frame: pd.DataFrame,
        cfg: ExperimentConfig,
        out_path: Optional[Union[str, Path]] = None,
    ) -> Dict[str, Path]:
        """
        Write the trial-level CSV, its summary CSV and the metadata sidecar.

        Args:
            frame: Trial-level results
            cfg: Configuration that produced them
            out_path: Destination (default: ``cfg.output_path``)

        Returns:
            Mapping of artifact name to written path
        """
        target = out_path or cfg.output_path
        if target is None:
            raise ExperimentError("no output path given", "NO_OUTPUT_PATH")
        out = Path(target)
        out.parent.mkdir(parents=True, exist_ok=True)

        frame.to_csv(out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        summary = self.summarize(frame, cfg.scenario)
        summary_file = summary_path(out)
        summary.to_csv(summary_file, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

        metadata: Dict[str, Any] = {
            "package_version": __version__,
            "scenario": cfg.scenario.value,
            "snr_convention": SNR_CONVENTION,
            "leverage_normalization": cfg.leverage_normalization.value,
            "ridge_lambda_source": cfg.ridge_lambda_source.value,
            "rate_unit": "nats",
            "bit_generator": BIT_GENERATOR,
            "rows": int(len(frame)),
            "config": cfg.to_dict(),
            "system": get_system_info(),
        }
        if cfg.scenario is Scenario.BENCH:
            metadata["scaling"] = self.bench_scaling(frame).to_dict(orient="records")
        if cfg.scenario is Scenario.CONVERGENCE:
            metadata["convergence_fit"] = self.convergence_fit(frame).to_dict(orient="records")
        meta_file = metadata_path(out)
        meta_file.write_bytes(
            orjson.dumps(metadata, option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY,
                         default=str)
        )
        self.logger.info("Wrote %d rows to %s", len(frame), out)
        return {"results": out, "summary": summary_file, "metadata": meta_file}

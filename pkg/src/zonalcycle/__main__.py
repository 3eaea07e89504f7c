"""Command-line entry point: one subcommand per family of checks."""
from __future__ import annotations

import math
import time
from collections.abc import Callable, Sequence
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Any, TypeVar

import click
import numpy as np
from attrs import frozen

from zonalcycle.braiding import (
    BraidOperator,
    apply_vector_PR,
    check_intertwining,
    check_string_formulas,
    pr_projector_decomposition,
    q_antisymmetric_tensor,
    yang_baxter_holds,
)
from zonalcycle.config import Config, Guards, OutputFormat, RunConfig, get_config
from zonalcycle.console import CONSOLE
from zonalcycle.cycles import (
    CycleVector,
    braid_eigen_check,
    braid_operator_for,
    braid_word_fixes,
    chain_vertex_singular_check,
    coxeter_length,
    cycle_weights,
    diagram_length,
    diagram_to_permutation,
    encode_cycle,
    encode_cycle_from_diagrams,
    enumerate_diagrams,
    form_duality_holds,
    left_arrow_count,
    singular_check,
    singular_path_count,
)
from zonalcycle.exactq import frac_rank, q_power
from zonalcycle.exception import (
    DomainError,
    GuardError,
    NotEigenvectorError,
    QuadratureNonConvergence,
    ZonalCycleError,
)
from zonalcycle.hyperint import (
    FormSpec,
    asymptotic_coefficient,
    beta_check,
    beta_monodromy_factor,
    dirichlet_product,
    eval_form,
    euler_beta,
    finite_difference_jacobian,
    gamma_ratio,
    integrate_zonal,
    random_interior_point,
    tau_pointwise_check,
    tau_transform,
    weight_from_pairings,
    z_independence,
)
from zonalcycle.repcore import (
    RootData,
    gram_matrix,
    iter_weight_drops,
    quotient_module,
    weight_of,
    words_of_drop,
)
from zonalcycle.report import (
    Report,
    exit_code,
    render_csv,
    render_json,
    render_rows_csv,
    write_text,
)

T = TypeVar("T")

DEFAULT_BETA_KS = (0.1, 0.25, 0.5, 0.75)
TAU_SAMPLE_POINTS = 100


@frozen(kw_only=True)
class CliState:
    config: Config
    output_format: OutputFormat
    out: Path | None


def _timed(function: Callable[[], T]) -> tuple[T, float]:
    started = time.perf_counter()
    value = function()
    return value, (time.perf_counter() - started) * 1000


def _parse_floats(
    _ctx: click.Context, _param: click.Parameter, value: str | None
) -> tuple[float, ...] | None:
    if value is None:
        return None
    try:
        return tuple(float(part) for part in value.split(","))
    except ValueError as error:
        raise click.BadParameter(
            f"expected comma-separated numbers: {value}"
        ) from error


def _parse_fractions(
    _ctx: click.Context, _param: click.Parameter, value: Sequence[str]
) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part) for part in value)
    except ValueError as error:
        raise click.BadParameter(
            f"expected rationals such as 1 or 1/2: {value}"
        ) from error


def _guard(name: str, value: int, limit: int, unsafe_large: bool) -> None:
    try:
        Guards.check(name, value, limit, unsafe_large)
    except GuardError as error:
        raise click.UsageError(str(error)) from error
    if value > limit:
        CONSOLE.log(f"Guard {name} ≤ {limit} overridden with {name}={value}")


def emit(state: CliState, command: str, reports: Sequence[Report]) -> None:
    if state.output_format == "json":
        text = render_json(command, reports)
    elif state.output_format == "csv":
        rows = [row for report in reports for row in report.details.get("rows", [])]
        text = render_rows_csv(rows) if rows else render_csv(reports)
    else:
        text = ""

    if state.out is None:
        if state.output_format == "text":
            write_text(command, reports, click.get_text_stream("stdout"))
        else:
            click.echo(text, nl=False)
    else:
        with state.out.open("w", encoding="utf-8") as handle:
            if state.output_format == "text":
                write_text(command, reports, handle)
            else:
                handle.write(text)
        CONSOLE.log(f"Wrote {len(reports)} reports to {state.out}")


def run_checks(
    state: CliState, cfg: RunConfig, produce: Callable[[], list[Report]]
) -> None:
    """Run `produce`, turn package errors into failed reports, emit and exit."""
    try:
        reports = produce()
    except GuardError as error:
        raise click.UsageError(str(error)) from error
    except ZonalCycleError as error:
        reports = [
            Report(
                check=cfg.subcommand,
                inputs=cfg.to_json(),
                status="fail",
                details={"error": f"{type(error).__name__}: {error}"},
            )
        ]
    emit(state, cfg.subcommand, reports)
    click.get_current_context().exit(exit_code(reports))


option_n = click.option(
    "--n", "n", default=1, show_default=True, type=click.IntRange(min=1), help="Rank"
)
option_unsafe = click.option(
    "--unsafe-large",
    is_flag=True,
    default=False,
    help="Run beyond the size guards",
)


@click.group()
@click.option(
    "--config-path",
    default=None,
    type=click.Path(exists=True, file_okay=True, dir_okay=False, path_type=Path),
    help="Load tolerances, quadrature defaults and guards from this YAML file",
)
@click.option(
    "--format",
    "output_format",
    default="json",
    show_default=True,
    type=click.Choice(["json", "csv", "text"]),
    help="Report format",
)
@click.option(
    "--out",
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write the reports to this file instead of stdout",
)
@click.pass_context
def main(
    ctx: click.Context,
    config_path: Path | None,
    output_format: OutputFormat,
    out: Path | None,
) -> None:
    """
    Check the zonal spherical function cycle: its Gamma-function constant, its
    quantum-group encoding and the braiding that acts on it.
    """
    config = get_config(config_path)
    if config_path is not None:
        CONSOLE.log(f"Loaded configuration from {config_path}")
    ctx.obj = CliState(config=config, output_format=output_format, out=out)


@main.command("verify-constant")
@option_n
@click.option("--k", default=0.5, show_default=True, type=float, help="Exponent k")
@click.option(
    "--z",
    default=None,
    callback=_parse_floats,
    help="Comma-separated 0 < z_1 < … < z_{n+1}  [default: 1,2,…,n+1]",
)
@click.option(
    "--nodes",
    default=None,
    type=click.IntRange(min=2),
    help="Gauss–Jacobi nodes per axis",
)
@click.option(
    "--samples",
    default=None,
    type=click.IntRange(min=2),
    help="Monte-Carlo sample count",
)
@click.option("--seed", default=None, type=int, help="Seed for sampling")
@click.option(
    "--scheme",
    default=None,
    type=click.Choice(["gauss-jacobi-tensor", "monte-carlo"]),
    help="Quadrature scheme  [default: tensor rule up to n=2, Monte Carlo above]",
)
@option_unsafe
@click.pass_obj
def verify_constant(
    state: CliState,
    n: int,
    k: float,
    z: tuple[float, ...] | None,
    nodes: int | None,
    samples: int | None,
    seed: int | None,
    scheme: Any,
    unsafe_large: bool,
) -> None:
    """Integrate the form over the cycle and compare with the Gamma ratio."""
    _guard("n", n, state.config.guards.symbolic_n, unsafe_large)
    cfg = RunConfig(
        subcommand="verify-constant",
        n=n,
        k=k,
        z=z,
        scheme=scheme,
        nodes=nodes,
        samples=samples,
        seed=seed,
        output_format=state.output_format,
        out=state.out,
        unsafe_large=unsafe_large,
    )
    try:
        spec = FormSpec.affine_killed(n, k, z)
    except DomainError as error:
        raise click.BadParameter(str(error)) from error
    quad = cfg.quadrature(state.config.quadrature)
    tolerances = state.config.tolerances
    if quad.scheme == "gauss-jacobi-tensor":
        relative, spread = tolerances.constant, tolerances.z_independence
    else:
        relative = tolerances.constant_monte_carlo
        spread = 2 * relative
    inputs = {**cfg.to_json(), "z": list(spec.z), "scheme": quad.scheme}

    def produce() -> list[Report]:
        expected = gamma_ratio(n, k)
        reports: list[Report] = []
        try:
            result = integrate_zonal(spec, quad, tolerances.refinement)
            reports.append(
                Report.numeric(
                    "constant",
                    expected=expected,
                    computed=result.value,
                    tolerance=relative,
                    inputs=inputs,
                    runtime_ms=result.runtime_ms,
                    details=result.to_json(),
                )
            )
        except QuadratureNonConvergence as error:
            reports.append(_nonconvergence("constant", expected, error, inputs))

        configurations = [
            spec.z,
            tuple(2.0 * i + 1 for i in range(n + 1)),
            tuple(float(i * i + 1) for i in range(1, n + 2)),
        ]
        specs = [spec.with_z(c) for c in configurations]
        try:
            spreads, runtime = _timed(
                lambda: [
                    z_independence(a, b, quad, tolerances.refinement)
                    for a, b in combinations(specs, 2)
                ]
            )
            reports.append(
                Report.numeric(
                    "z-independence",
                    expected=0.0,
                    computed=max(spreads),
                    tolerance=spread * expected,
                    relative=False,
                    inputs={**inputs, "z": [list(c) for c in configurations]},
                    runtime_ms=runtime,
                )
            )
        except QuadratureNonConvergence as error:
            reports.append(_nonconvergence("z-independence", 0.0, error, inputs))

        reports.append(
            Report.numeric(
                "dirichlet-product",
                expected=expected,
                computed=dirichlet_product(n, k),
                tolerance=1e-12,
                inputs=inputs,
            )
        )

        rng = np.random.default_rng(quad.seed)
        points = [random_interior_point(spec, rng) for _ in range(TAU_SAMPLE_POINTS)]
        worst, runtime = _timed(
            lambda: max(
                tau_pointwise_check(spec, t) / max(1.0, eval_form(spec, t))
                for t in points
            )
        )
        reports.append(
            Report.numeric(
                "tau-pointwise",
                expected=0.0,
                computed=worst,
                tolerance=tolerances.tau_pointwise,
                relative=False,
                inputs={**inputs, "points": TAU_SAMPLE_POINTS},
                runtime_ms=runtime,
            )
        )
        reports.append(
            Report.numeric(
                "tau-jacobian",
                expected=finite_difference_jacobian(spec, points[0]),
                computed=tau_transform(spec, points[0]).jacobian,
                tolerance=1e-6,
                inputs=inputs,
            )
        )
        return reports

    run_checks(state, cfg, produce)


def _nonconvergence(
    check: str, expected: float, error: QuadratureNonConvergence, inputs: dict[str, Any]
) -> Report:
    return Report(
        check=check,
        inputs=inputs,
        expected=expected,
        computed=error.fine,
        status="warn",
        tolerance=error.tolerance,
        details={"coarse": error.coarse, "fine": error.fine},
    )


@main.command("verify-beta")
@click.option(
    "--k",
    "ks",
    multiple=True,
    type=float,
    help="Exponent k < 1, repeatable  [default: 0.1 0.25 0.5 0.75]",
)
@click.option(
    "--z",
    default="0,1",
    show_default=True,
    callback=_parse_floats,
    help="Comma-separated z1,z2",
)
@click.pass_obj
def verify_beta(state: CliState, ks: tuple[float, ...], z: tuple[float, ...]) -> None:
    """Check the one-dimensional beta integral and Euler's beta function."""
    if len(z) != 2:
        raise click.BadParameter("expected exactly two values z1,z2", param_hint="--z")
    cfg = RunConfig(subcommand="verify-beta", z=z, output_format=state.output_format)
    tolerance = state.config.tolerances.beta

    def produce() -> list[Report]:
        reports = []
        for k in ks or DEFAULT_BETA_KS:
            check, runtime = _timed(lambda: beta_check(k, z[0], z[1]))
            factor = beta_monodromy_factor(k)
            reports.append(
                Report.numeric(
                    f"beta k={k:g}",
                    expected=check.closed_form,
                    computed=check.numeric,
                    tolerance=tolerance,
                    inputs={"k": k, "z": list(z)},
                    runtime_ms=runtime,
                    details={"monodromy_factor": [factor.real, factor.imag]},
                )
            )
        for a, b in ((1.0, 1.0), (0.5, 1.5)):
            check = euler_beta(a, b)
            reports.append(
                Report.numeric(
                    f"euler-beta a={a:g} b={b:g}",
                    expected=check.closed_form,
                    computed=check.numeric,
                    tolerance=tolerance,
                    inputs={"a": a, "b": b},
                )
            )
        return reports

    run_checks(state, cfg, produce)


@main.command("braid")
@option_n
@click.option(
    "--slot",
    default=None,
    type=click.IntRange(min=1),
    help="Braid factors (slot, slot+1); factor 0 is Λ(0)  [default: every slot]",
)
@click.option(
    "--check-string-formulas",
    "check_formulas",
    is_flag=True,
    default=False,
    help="Also compare PR on every pair of string vectors with its closed formula",
)
@click.option(
    "--convention",
    default="raise-first",
    show_default=True,
    type=click.Choice(["raise-first", "lower-first"]),
    help="Direction of the off-diagonal part of R",
)
@click.option(
    "--vector-rep",
    is_flag=True,
    default=False,
    help="Also check R̂ on the vector representation",
)
@option_unsafe
@click.pass_obj
def braid(
    state: CliState,
    n: int,
    slot: int | None,
    check_formulas: bool,
    convention: Any,
    vector_rep: bool,
    unsafe_large: bool,
) -> None:
    """Apply PR to the encoded cycle and report its eigenvalue per slot."""
    _guard("n", n, state.config.guards.symbolic_n, unsafe_large)
    if slot is not None and slot > n:
        raise click.BadParameter(f"slot must lie in 1..{n}", param_hint="--slot")
    cfg = RunConfig(
        subcommand="braid",
        n=n,
        slot=slot,
        output_format=state.output_format,
        unsafe_large=unsafe_large,
    )

    def produce() -> list[Report]:
        root_data, _, string = cycle_weights(n)
        cycle = encode_cycle(n, 1)
        R, runtime = _timed(lambda: braid_operator_for(root_data, string, convention))
        failures = check_intertwining(R)
        reports = [
            Report.flag(
                "intertwining",
                holds=not failures,
                inputs={"n": n, "convention": convention},
                runtime_ms=runtime,
                details={
                    "failures": failures,
                    "d": {str(list(p.drop)): str(p.value) for p in R.prefactors()},
                },
            )
        ]
        diagonal = R.diagonal_checks()
        reports.append(
            Report.flag(
                "diagonal-prefactor",
                holds=all(c.agrees for c in diagonal),
                inputs={"n": n, "convention": convention},
                details={"blocks": [c.to_json() for c in diagonal]},
            )
        )
        for s in [slot] if slot else range(1, n + 1):
            reports.append(_eigen_report(cycle, s, R))
            reports.append(
                Report.flag(
                    f"square slot={s}",
                    holds=braid_word_fixes(cycle, [s, s], R),
                    inputs={"n": n, "slot": s},
                )
            )
        word = list(range(1, n + 1)) * 2
        reports.append(
            Report.flag(
                "even-word",
                holds=braid_word_fixes(cycle, word, R),
                inputs={"n": n, "slots": word},
            )
        )
        if check_formulas:
            checks = check_string_formulas(R, n)
            reports.append(
                Report.flag(
                    "string-formulas",
                    holds=all(c.passed for c in checks),
                    inputs={"n": n},
                    details={
                        "pairs": len(checks),
                        "failed": [[c.left, c.right] for c in checks if not c.passed],
                    },
                )
            )
        if vector_rep:
            reports.extend(_vector_rep_reports(n))
        return reports

    run_checks(state, cfg, produce)


def _eigen_report(cycle: CycleVector, slot: int, R: BraidOperator) -> Report:
    inputs = {"n": cycle.n, "slot": slot}
    try:
        eigenvalue, runtime = _timed(lambda: braid_eigen_check(cycle, slot, R))
    except NotEigenvectorError as error:
        return Report(
            check=f"eigenvalue slot={slot}",
            inputs=inputs,
            expected="-1",
            status="fail",
            details={"error": str(error), "residual": str(error.residual)},
        )
    return Report.exact(
        f"eigenvalue slot={slot}",
        expected=-1,
        computed=eigenvalue,
        inputs=inputs,
        runtime_ms=runtime,
    )


def _vector_rep_reports(n: int) -> list[Report]:
    reports = [
        Report.flag("yang-baxter", holds=yang_baxter_holds(n), inputs={"n": n}),
    ]
    decomposition = pr_projector_decomposition(n)
    reports.append(
        Report.flag(
            "projector-decomposition",
            holds=decomposition.consistent,
            inputs={"n": n},
            details={
                "multiplicities": [
                    decomposition.symmetric_multiplicity,
                    decomposition.antisymmetric_multiplicity,
                ],
                "eigenvalues": [str(e) for e in decomposition.eigenvalues],
            },
        )
    )
    pairs_hold = True
    for k, l in combinations(range(n + 1), 2):
        vector = {(k, l): q_power(Fraction(1, 4)), (l, k): q_power(Fraction(-1, 4), -1)}
        image = apply_vector_PR(n, 0, vector)
        pairs_hold &= image == {w: -c for w, c in vector.items()}
    reports.append(Report.flag("vector-pairs", holds=pairs_hold, inputs={"n": n}))
    antisymmetric = q_antisymmetric_tensor(n)
    negated = {w: -c for w, c in antisymmetric.items()}
    reports.append(
        Report.flag(
            "q-antisymmetric",
            holds=all(
                apply_vector_PR(n, s, antisymmetric) == negated for s in range(n)
            ),
            inputs={"n": n},
        )
    )
    return reports


@main.command("encode")
@option_n
@option_unsafe
@click.pass_obj
def encode(state: CliState, n: int, unsafe_large: bool) -> None:
    """Encode the cycle as a tensor vector and check that it is singular."""
    _guard("n", n, state.config.guards.symbolic_n, unsafe_large)
    cfg = RunConfig(
        subcommand="encode",
        n=n,
        output_format=state.output_format,
        unsafe_large=unsafe_large,
    )

    def produce() -> list[Report]:
        inputs = {"n": n}
        first = encode_cycle(n, 1)
        second = encode_cycle(n, 2)
        reports = [
            Report.exact(
                "term-count",
                expected=math.factorial(n + 1),
                computed=len(first.vector.terms),
                inputs=inputs,
                details={"vector": str(first.vector)},
            )
        ]
        for form, cycle in ((1, first), (2, second)):
            holds, runtime = _timed(lambda: singular_check(cycle))
            reports.append(
                Report.flag(
                    f"singular form={form}",
                    holds=holds,
                    inputs={**inputs, "form": form},
                    runtime_ms=runtime,
                )
            )
        reports.append(
            Report.flag(
                "form-duality",
                holds=form_duality_holds(n),
                inputs=inputs,
                details={"denominator_power": second.denominator_power},
            )
        )
        reports.append(
            Report.flag(
                "diagram-encoding",
                holds=encode_cycle_from_diagrams(n).vector == first.vector,
                inputs=inputs,
            )
        )
        return reports

    run_checks(state, cfg, produce)


@main.command("diagrams")
@click.option(
    "--n", "n", default=3, show_default=True, type=click.IntRange(min=1), help="Rows"
)
@option_unsafe
@click.pass_obj
def diagrams(state: CliState, n: int, unsafe_large: bool) -> None:
    """Enumerate all diagrams and compare lengths with inversion counts."""
    _guard("n", n, state.config.guards.diagrams_n, unsafe_large)
    cfg = RunConfig(
        subcommand="diagrams",
        n=n,
        output_format=state.output_format,
        unsafe_large=unsafe_large,
    )

    def produce() -> list[Report]:
        rows: list[dict[str, Any]] = []
        images = set()
        for d in enumerate_diagrams(n):
            w = diagram_to_permutation(d)
            images.add(w.images)
            rows.append(
                {
                    "marked": list(d.marked),
                    "permutation": list(w.images),
                    "length": diagram_length(d),
                    "left_arrows": left_arrow_count(d),
                    "inversions": coxeter_length(w),
                }
            )
        inputs = {"n": n}
        return [
            Report.exact(
                "bijection",
                expected=math.factorial(n),
                computed=len(images),
                inputs=inputs,
                details={"diagrams": len(rows)},
            ),
            Report.flag(
                "length",
                holds=all(
                    r["length"] == r["left_arrows"] == r["inversions"] for r in rows
                ),
                inputs=inputs,
                details={"rows": rows},
            ),
        ]

    run_checks(state, cfg, produce)


@main.command("asymptotic")
@click.option(
    "--s",
    "s",
    default=2,
    show_default=True,
    type=click.IntRange(min=2),
    help="Row s of the chain",
)
@click.option("--k", default=0.5, show_default=True, type=float, help="Exponent k")
@click.option(
    "--pairing",
    "pairings",
    multiple=True,
    callback=_parse_fractions,
    help="(λ, α_i) for i = 1..s−1, repeatable; one value is used for all  [default: 1]",
)
@click.option(
    "--check-singular",
    is_flag=True,
    default=False,
    help="Also check that the encoded chain vertex is singular",
)
@option_unsafe
@click.pass_obj
def asymptotic(
    state: CliState,
    s: int,
    k: float,
    pairings: tuple[Fraction, ...],
    check_singular: bool,
    unsafe_large: bool,
) -> None:
    """Compare the leading asymptotic coefficient with iterated quadrature."""
    _guard("s", s, state.config.guards.asymptotic_s, unsafe_large)
    if not pairings:
        pairings = (Fraction(1),)
    if len(pairings) == 1:
        pairings = pairings * (s - 1)
    if len(pairings) != s - 1:
        raise click.BadParameter(
            f"expected 1 or {s - 1} values, got {len(pairings)}", param_hint="--pairing"
        )
    cfg = RunConfig(
        subcommand="asymptotic",
        n=s - 1,
        k=k,
        s=s,
        output_format=state.output_format,
        unsafe_large=unsafe_large,
    )
    n = s - 1
    lam = weight_from_pairings(pairings, n)
    inputs = {"s": s, "k": k, "pairings": [str(p) for p in pairings]}

    def produce() -> list[Report]:
        check, runtime = _timed(lambda: asymptotic_coefficient(lam, s, k))
        reports = [
            Report.numeric(
                "asymptotic",
                expected=check.closed_form,
                computed=check.numeric,
                tolerance=state.config.tolerances.asymptotic,
                inputs=inputs,
                runtime_ms=runtime,
            ),
            Report.exact(
                "path-count",
                expected=math.factorial(n + 1),
                computed=singular_path_count(n),
                inputs={"n": n},
            ),
        ]
        if check_singular:
            holds, runtime = _timed(lambda: chain_vertex_singular_check(lam, s))
            reports.append(
                Report.flag(
                    "chain-vertex-singular",
                    holds=holds,
                    inputs=inputs,
                    runtime_ms=runtime,
                )
            )
        return reports

    run_checks(state, cfg, produce)


@main.command("gram")
@option_n
@option_unsafe
@click.pass_obj
def gram(state: CliState, n: int, unsafe_large: bool) -> None:
    """Gram ranks per weight space of the vector representation and of L(g_1 − g_0)."""
    _guard("n", n, state.config.guards.symbolic_n, unsafe_large)
    cfg = RunConfig(
        subcommand="gram",
        n=n,
        output_format=state.output_format,
        unsafe_large=unsafe_large,
    )

    def produce() -> list[Report]:
        root_data = RootData(n)
        reports = []
        for label, weight in (
            ("vector", root_data.fundamental_weight(1)),
            ("string", root_data.string_weight()),
        ):
            ranks, runtime = _timed(lambda: _gram_ranks(root_data, weight, n))
            reports.append(
                Report.exact(
                    f"dimension {label}",
                    expected=n + 1,
                    computed=sum(r["rank"] for r in ranks),
                    inputs={"n": n, "highest_weight": weight.to_json()},
                    runtime_ms=runtime,
                    details={"rows": ranks},
                )
            )
        return reports

    run_checks(state, cfg, produce)


def _gram_ranks(root_data: RootData, weight: Any, height: int) -> list[dict[str, Any]]:
    """Rank of the Gram matrix on every weight space down to `height` simple roots."""
    module = quotient_module(root_data, weight)
    rows = []
    for drop in iter_weight_drops(root_data, height):
        words = words_of_drop(drop)
        mu = weight_of(words[0], weight, root_data)
        rank = frac_rank(gram_matrix(root_data, weight, mu, words))
        if rank != module.dimension(drop):
            CONSOLE.log(f"Gram rank {rank} and basis size disagree at {drop}")
        if rank:
            rows.append({"drop": list(drop), "words": len(words), "rank": rank})
    return rows


if __name__ == "__main__":
    main()

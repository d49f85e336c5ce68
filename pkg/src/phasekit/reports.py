"""Request handlers and report rendering.

The HTTP routes and the CLI subcommands both call these handlers, so a
report is identical no matter which door it came through.  All randomness
flows from the seed in the request; nothing here reads clocks or paths,
keeping serialized reports reproducible byte for byte.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor

from .kitaev import kitaev_trials, run_kitaev
from .models import (
    CaseCostModel,
    CompareReport,
    CompareRequest,
    ConventionalCountModel,
    CountReport,
    CountRequest,
    EstimateRequest,
    KitaevCountModel,
    PhaseModel,
    RunReport,
    ShorReport,
    ShorRequest,
    StagedCountModel,
    SweepReport,
    SweepRequest,
    SweepRow,
    TallyModel,
)
from .errors import PrecisionError
from .phases import fraction_from_bits, parse_phase
from .qft import conventional_counts
from .shor import compare_case_costs, shor_attempt
from .staged import StagedConfig, run_staged, staged_cost


def _exactness(phi, n: int, bits) -> bool | None:
    """True/False when phi is representable in n bits, else None."""
    try:
        expected = phi.to_bits(n)
    except PrecisionError:
        return None
    return bits is not None and bits == expected


def handle_estimate(req: EstimateRequest) -> RunReport:
    phi = parse_phase(req.phase)
    if req.method == "staged":
        cfg = StagedConfig(
            n=req.n,
            k=req.k,
            backend=req.backend,
            seed=req.seed,
            paper_cost_mode=req.paper_cost_mode,
        )
        run = run_staged(phi, cfg)
        return RunReport(
            method="staged",
            inputs=req,
            success=True,
            failure=None,
            bits=str(run.bits),
            phase_estimate=PhaseModel.from_phase(run.phase),
            exact=_exactness(phi, req.n, run.bits),
            deterministic=run.deterministic,
            stage_count=run.stage_count,
            k_effective=run.k_effective,
            f_trace=[p.rational() for p in run.f_trace],
            estimates=None,
            trials_per_test=None,
            tally=TallyModel.from_tally(run.tally),
        )
    run = run_kitaev(
        phi,
        req.n,
        seed=req.seed,
        trials=req.trials,
        shared_budget=req.shared_budget,
    )
    success = run.bits is not None
    return RunReport(
        method="kitaev",
        inputs=req,
        success=success,
        failure=None if success else f"reconstruction_failed_at_bit_{run.failure_bit}",
        bits=str(run.bits) if success else None,
        phase_estimate=(
            PhaseModel.from_phase(fraction_from_bits(run.bits)) if success else None
        ),
        exact=_exactness(phi, req.n, run.bits),
        deterministic=None,
        stage_count=None,
        k_effective=None,
        f_trace=None,
        estimates=list(run.estimates),
        trials_per_test=run.trials_per_test,
        tally=TallyModel.from_tally(run.tally),
    )


def _kitaev_budget(n: int) -> int:
    return 1 if n < 2 else kitaev_trials(n)


def handle_count(req: CountRequest) -> CountReport:
    methods = req.methods or ["staged", "conventional", "kitaev"]
    n, k = req.n, req.k
    staged = None
    conventional = None
    kitaev = None
    if "staged" in methods:
        cost = staged_cost(n, k)
        k_eff = min(k, n)
        staged = StagedCountModel(
            stages=cost.stages,
            workspace_qubits=k_eff,
            qft_rotations=cost.qft_rotations,
            reset_rotations=cost.reset_rotations,
            total=cost.total,
            paper_approx=cost.paper_approx,
            controlled_u=n,
            classical_register_bits=64 * (k_eff + 2) + n,
        )
    if "conventional" in methods:
        tally = conventional_counts(n)
        conventional = ConventionalCountModel(
            rotations=tally.qft_rotations,
            hadamards=tally.hadamards,
            measurements=tally.measurements,
            controlled_u=n,
            workspace_qubits=n,
        )
    if "kitaev" in methods:
        trials = _kitaev_budget(n)
        total = 2 * n * trials
        kitaev = KitaevCountModel(
            trials_per_test=trials,
            total_tests=total,
            comparison_tests=n * trials,
            gate_hadamards=2 * total,
            gate_controlled_u=total,
            workspace_qubits=1,
        )
    return CountReport(
        inputs=req, n=n, k=k, staged=staged, conventional=conventional, kitaev=kitaev
    )


def handle_shor(req: ShorRequest) -> ShorReport:
    attempt = shor_attempt(
        req.N,
        req.k,
        recovery=req.recovery,
        x=req.x,
        epsilon=req.epsilon,
        seed=req.seed,
        pooled_runs=req.pooled_runs,
        paper_cost_mode=req.paper_cost_mode,
    )
    return ShorReport(
        inputs=req,
        success=attempt.factors is not None,
        failure=attempt.failure,
        x=attempt.x,
        n=attempt.n,
        register_bits=attempt.case_costs.big_l,
        pooled_runs=attempt.pooled_runs,
        classical_shortcut=attempt.classical_shortcut,
        phases=[PhaseModel.from_phase(p) for p in attempt.phases],
        bits=[str(run.bits) for run in attempt.runs],
        r_candidate=attempt.r_candidate,
        r=attempt.r,
        factors=list(attempt.factors) if attempt.factors else None,
        tally=TallyModel.from_tally(attempt.tally),
        case_costs=CaseCostModel.from_comparison(attempt.case_costs),
    )


def _sweep_row(n: int, k: int) -> SweepRow:
    cost = staged_cost(n, k)
    return SweepRow(
        n=n,
        k=k,
        stages=cost.stages,
        staged_exact=cost.total,
        staged_paper_approx=cost.paper_approx,
        conventional=n * (n - 1) // 2,
        kitaev_tests=n * _kitaev_budget(n),
    )


def handle_sweep(req: SweepRequest) -> SweepReport:
    cells = sorted(
        {(n, k) for n in req.n_values for k in req.k_values}
    )
    if not cells:
        return SweepReport(inputs=req, rows=[])
    with ThreadPoolExecutor(max_workers=min(8, len(cells))) as pool:
        rows = list(pool.map(lambda cell: _sweep_row(*cell), cells))
    return SweepReport(inputs=req, rows=rows)


def handle_compare(req: CompareRequest) -> CompareReport:
    cmp = compare_case_costs(req.big_l, req.k, req.epsilon)
    return CompareReport(inputs=req, costs=CaseCostModel.from_comparison(cmp))


# -- rendering ----------------------------------------------------------------

SWEEP_HEADER = [
    "n",
    "k",
    "stages",
    "staged_exact",
    "staged_paper_approx",
    "conventional",
    "kitaev_tests",
]


def sweep_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in report.rows:
        writer.writerow(
            [
                row.n,
                row.k,
                row.stages,
                row.staged_exact,
                row.staged_paper_approx,
                row.conventional,
                row.kitaev_tests,
            ]
        )
    return buf.getvalue()


def _tally_line(tally: TallyModel) -> str:
    return (
        f"hadamards={tally.hadamards} qft_hadamards={tally.qft_hadamards} "
        f"qft_rotations={tally.qft_rotations} reset_rotations={tally.reset_rotations} "
        f"controlled_u={tally.controlled_u} u_applications={tally.u_applications} "
        f"measurements={tally.measurements} stages={tally.stages} "
        f"qft_count={tally.qft_count} rotation_count={tally.rotation_count}"
    )


def _yesno(flag: bool | None) -> str:
    if flag is None:
        return "n/a"
    return "yes" if flag else "no"


def render_estimate_text(report: RunReport) -> str:
    req = report.inputs
    lines = [f"{report.method} estimate"]
    lines.append(f"  phase in      {req.phase}")
    lines.append(f"  n, k          {req.n}, {req.k}")
    lines.append(f"  seed          {req.seed}")
    if report.method == "staged":
        lines.append(f"  backend       {req.backend}")
        lines.append(f"  stages        {report.stage_count} (workspace {report.k_effective})")
    else:
        lines.append(f"  trials/test   {report.trials_per_test}")
    if report.success:
        est = report.phase_estimate
        lines.append(f"  bits          {report.bits}")
        lines.append(f"  phase out     {est.rational} = {est.value}")
    else:
        lines.append(f"  failure       {report.failure}")
    lines.append(f"  exact         {_yesno(report.exact)}")
    if report.deterministic is not None:
        lines.append(f"  deterministic {_yesno(report.deterministic)}")
    if report.f_trace is not None:
        lines.append(f"  F trace       {' -> '.join(report.f_trace)}")
    if report.estimates is not None:
        shown = ", ".join(f"{e:.6f}" for e in report.estimates)
        lines.append(f"  estimates     {shown}")
    lines.append(f"  tally         {_tally_line(report.tally)}")
    return "\n".join(lines) + "\n"


def render_count_text(report: CountReport) -> str:
    lines = [f"gate counts at n={report.n}, k={report.k}"]
    if report.staged is not None:
        s = report.staged
        lines.append("  staged")
        lines.append(f"    rotations         {s.total} (qft {s.qft_rotations} + resets {s.reset_rotations})")
        lines.append(f"    paper approx      {s.paper_approx}")
        lines.append(f"    stages            {s.stages}")
        lines.append(f"    workspace qubits  {s.workspace_qubits}")
        lines.append(f"    controlled-U      {s.controlled_u}")
        lines.append(f"    classical bits    {s.classical_register_bits}")
    if report.conventional is not None:
        c = report.conventional
        lines.append("  conventional")
        lines.append(f"    rotations         {c.rotations}")
        lines.append(f"    hadamards         {c.hadamards}")
        lines.append(f"    measurements      {c.measurements}")
        lines.append(f"    workspace qubits  {c.workspace_qubits}")
    if report.kitaev is not None:
        kt = report.kitaev
        lines.append("  kitaev")
        lines.append(f"    trials per test   {kt.trials_per_test}")
        lines.append(f"    tests (2 types)   {kt.total_tests}")
        lines.append(f"    tests (shared)    {kt.comparison_tests}")
        lines.append(f"    gate hadamards    {kt.gate_hadamards}")
        lines.append(f"    gate controlled-U {kt.gate_controlled_u}")
        lines.append(f"    workspace qubits  {kt.workspace_qubits}")
    return "\n".join(lines) + "\n"


def render_shor_text(report: ShorReport) -> str:
    lines = [f"order finding against N={report.inputs.N}"]
    lines.append(f"  x             {report.x}")
    lines.append(f"  recovery      {report.inputs.recovery} (n={report.n}, runs={report.pooled_runs})")
    lines.append(f"  k             {report.inputs.k}")
    lines.append(f"  seed          {report.inputs.seed}")
    if report.classical_shortcut:
        lines.append("  note          gcd(x, N) > 1; factored classically")
    for i, phase in enumerate(report.phases):
        lines.append(f"  phase[{i}]      {phase.rational} = {phase.value}")
    lines.append(f"  r candidate   {report.r_candidate}")
    lines.append(f"  r             {report.r}")
    if report.factors:
        lines.append(f"  factors       {report.factors[0]} x {report.factors[1]}")
    else:
        lines.append(f"  failure       {report.failure}")
    lines.append(f"  tally         {_tally_line(report.tally)}")
    cc = report.case_costs
    lines.append(
        f"  case costs    I: n={cc.n_case_i} exact={cc.exact_case_i} paper={cc.paper_case_i}"
    )
    lines.append(
        f"                II: n={cc.n_case_ii} exact={cc.exact_case_ii} paper={cc.paper_case_ii}"
    )
    lines.append(f"  ratio         paper {cc.ratio_paper:.4f}, exact {cc.ratio_exact:.4f}")
    return "\n".join(lines) + "\n"


def render_compare_text(report: CompareReport) -> str:
    cc = report.costs
    lines = [f"case costs at L={cc.big_l}, k={cc.k}, epsilon={cc.epsilon}"]
    lines.append(f"  case I   n={cc.n_case_i} stages={cc.stages_case_i} "
                 f"exact={cc.exact_case_i} paper={cc.paper_case_i}")
    lines.append(f"  case II  n={cc.n_case_ii} stages={cc.stages_case_ii} "
                 f"exact={cc.exact_case_ii} paper={cc.paper_case_ii} "
                 f"(ceiled {cc.paper_case_ii_ceiled})")
    lines.append(f"  ratio    paper {cc.ratio_paper:.4f}, exact {cc.ratio_exact:.4f}")
    return "\n".join(lines) + "\n"

import itertools

from hypothesis import HealthCheck, settings

from phasekit.rng import DeadBranch, ForcedOutcomes

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


def transcript_distribution(run, num_draws):
    """Exact outcome distribution of a sampling routine.

    ``run(source)`` must consume exactly ``num_draws`` bits from the source
    and return a hashable outcome.  Iterating every transcript through
    ForcedOutcomes turns the sampler into an enumerator; dead branches
    carry zero probability and are skipped.
    """
    dist = {}
    for bits in itertools.product((0, 1), repeat=num_draws):
        source = ForcedOutcomes(bits)
        try:
            outcome = run(source)
        except DeadBranch:
            continue
        assert source.exhausted, f"transcript {bits} not fully consumed"
        dist[outcome] = dist.get(outcome, 0.0) + source.likelihood
    return dist

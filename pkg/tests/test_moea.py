import numpy as np
import pytest

from errors import InfeasibleSolutionError
from moea import (
    V_MAX,
    V_MIN,
    CvrpGenome,
    CvrpSuite,
    FjspGenome,
    FjspSuite,
    Individual,
    Mopso,
    MopsoParams,
    Nsga2,
    Nsga2Params,
    Particle,
    SearchState,
    crossover_cvrp,
    crossover_fjsp,
    decode_cvrp_keys,
    init_population_fjsp,
    make_algorithm,
    mopso_generation,
    mutate_fjsp,
    ordered_crossover,
    pox,
    select_survivors,
    shuffle_mutation,
    update_archive,
    validate_genome,
)
from moea.fjsp_operators import eligible_counts, local_selection
from moea.cvrp_operators import validate_tour
from pareto import dominates, hypervolume, non_dominated_mask
from problems import CvrpInstance, ObjectiveSet, generate_cvrp, generate_fjsp
from utils import StageTimer


def multiset_of(population):
    return sorted(tuple(ind.objectives.tolist()) for ind in population)


def test_init_mix_counts(fjsp_5j5m, rng):
    genomes = init_population_fjsp(fjsp_5j5m, 10, rng)
    assert len(genomes) == 10
    local = local_selection(fjsp_5j5m)
    assert all(np.array_equal(g.machine_selection, local) for g in genomes[6:9])
    for g in genomes:
        validate_genome(fjsp_5j5m, g)


def test_init_single_individual_is_random(fjsp_5j5m):
    genomes = init_population_fjsp(fjsp_5j5m, 1, np.random.default_rng(0))
    expected = np.random.default_rng(0).integers(0, eligible_counts(fjsp_5j5m))
    assert np.array_equal(genomes[0].machine_selection, expected)


def test_init_single_machine_has_no_choice(rng):
    inst = generate_fjsp(2, 3, 1)
    for g in init_population_fjsp(inst, 10, rng):
        assert not g.machine_selection.any()


def test_pox_extremes():
    a = np.array([0, 1, 0, 2, 1, 2])
    b = np.array([2, 2, 1, 1, 0, 0])
    assert np.array_equal(pox(a, b, np.array([0, 1, 2])), a)
    assert np.array_equal(pox(a, b, np.array([], dtype=int)), b)
    child = pox(a, b, np.array([0]))
    assert child[0] == 0 and child[2] == 0
    assert child[[1, 3, 4, 5]].tolist() == [2, 2, 1, 1]


def test_crossover_and_mutation_keep_fjsp_genomes_valid(rng):
    for seed in range(20):
        inst = generate_fjsp(seed, 4, 3)
        population = init_population_fjsp(inst, 8, rng)
        counts = eligible_counts(inst)
        for _ in range(25):
            i, j = rng.choice(len(population), size=2, replace=False)
            for child in crossover_fjsp(population[i], population[j], rng, inst.num_jobs):
                validate_genome(inst, child)
                validate_genome(inst, mutate_fjsp(child, 1.0, rng, counts))


def test_fjsp_mutation_zero_rate_is_identity(fjsp_5j5m, rng):
    genome = init_population_fjsp(fjsp_5j5m, 1, rng)[0]
    assert FjspSuite(fjsp_5j5m).mutate(genome, 0.0, rng) is genome


def test_validate_genome_rejects_bad_sequence(small_fjsp):
    genome = init_population_fjsp(small_fjsp, 1, np.random.default_rng(1))[0]
    broken = FjspGenome(genome.machine_selection.copy(), genome.operation_sequence[:-1].copy())
    with pytest.raises(InfeasibleSolutionError):
        validate_genome(small_fjsp, broken)


def test_ordered_crossover_extremes(rng):
    a = np.array([3, 1, 4, 0, 2])
    b = np.array([0, 1, 2, 3, 4])
    assert np.array_equal(ordered_crossover(a, b, 0, 5), a)
    assert np.array_equal(ordered_crossover(a, b, 1, 3), np.array([0, 1, 4, 2, 3]))
    c1, c2 = crossover_cvrp(CvrpGenome(a), CvrpGenome(a.copy()), rng)
    assert np.array_equal(c1.tour, a) and np.array_equal(c2.tour, a)


def test_cvrp_operators_keep_permutations(rng):
    n = 15
    suite = CvrpSuite(generate_cvrp(5, n))
    for _ in range(500):
        a, b = CvrpGenome(rng.permutation(n)), CvrpGenome(rng.permutation(n))
        for child in crossover_cvrp(a, b, rng):
            validate_tour(child.tour, n)
        validate_tour(shuffle_mutation(a, 1.0, rng).tour, n)
    assert suite.mutate(a, 0.0, rng) is a


def test_decode_cvrp_keys():
    inst = CvrpInstance(depot=[0.5, 0.5], coords=np.full((4, 2), 0.1), demands=[3, 3, 3, 3], capacity=40)
    assert decode_cvrp_keys(np.array([0.1, 0.2, 0.3, 0.4]), inst) == [[0, 1, 2, 3]]
    assert decode_cvrp_keys(np.array([0.9, 0.5, 0.5, 0.1]), inst) == [[3, 1, 2, 0]]
    tight = CvrpInstance(depot=[0.5, 0.5], coords=np.full((4, 2), 0.1), demands=[3, 3, 3, 3], capacity=6)
    assert decode_cvrp_keys(np.array([0.1, 0.2, 0.3, 0.4]), tight) == [[0, 1], [2, 3]]


def test_update_archive_keeps_only_non_dominated():
    archive = update_archive([], [Individual(None, np.array(p, dtype=float)) for p in [(1, 3), (2, 2), (3, 3)]])
    assert sorted(tuple(i.objectives) for i in archive) == [(1.0, 3.0), (2.0, 2.0)]
    archive = update_archive(archive, [Individual("new", np.array([2.0, 2.0])), Individual(None, np.array([0.0, 0.0]))])
    assert [tuple(i.objectives) for i in archive] == [(0.0, 0.0)]


def test_select_survivors_takes_fronts_then_crowding():
    objectives = np.array([(1, 4), (2, 3), (3, 2), (4, 1), (5, 5), (2.5, 2.5)], dtype=float)
    chosen = select_survivors(objectives, 4)
    # front 0 has five members; the least crowded interior one is dropped
    assert len(chosen) == 4
    assert sorted(chosen) == [0, 1, 2, 3]


@pytest.mark.parametrize("problem", ["fjsp", "cvrp"])
def test_nsga2_without_variation_preserves_population(problem, small_fjsp, small_cvrp):
    instance = small_fjsp if problem == "fjsp" else small_cvrp
    algorithm = make_algorithm("nsga2", instance, ObjectiveSet.BI, population_size=12)
    rng = np.random.default_rng(3)
    state = algorithm.initialize(rng)
    before = multiset_of(state.population)
    params = algorithm.make_params((0.0, 0.0))
    for _ in range(3):
        state = algorithm.step(state, params, rng)
    assert multiset_of(state.population) == before


def test_nsga2_generation_is_monotone(fjsp_5j5m):
    algorithm = Nsga2(FjspSuite(fjsp_5j5m), population_size=20)
    rng = np.random.default_rng(5)
    state = algorithm.initialize(rng)
    params = Nsga2Params(0.9, 0.1)
    for _ in range(10):
        previous = state
        state = algorithm.step(state, params, rng)
        assert len(state.population) == 20
        assert state.hv_best >= previous.hv_best
        assert np.array_equal(state.nadir, previous.nadir)
        assert hypervolume(state.archive_matrix(), state.nadir) >= hypervolume(previous.archive_matrix(), state.nadir) - 1e-9
        assert non_dominated_mask(state.archive_matrix()).all()
        # every old archive point is weakly covered by the new archive
        for point in previous.archive_matrix():
            assert any(np.all(a <= point) for a in state.archive_matrix())
    assert state.generation == 10
    assert len(state.history) == 11
    assert np.all(np.diff(state.history) >= 0)


def test_nsga2_is_deterministic(fjsp_5j5m):
    def run():
        algorithm = make_algorithm("nsga2", fjsp_5j5m, ObjectiveSet.TRI, population_size=10)
        rng = np.random.default_rng(9)
        state = algorithm.initialize(rng)
        return algorithm.step(state, algorithm.static_params(), rng)

    a, b = run(), run()
    assert multiset_of(a.population) == multiset_of(b.population)
    assert a.hv_current == b.hv_current


def test_nsga2_records_timer_stages(small_cvrp):
    algorithm = Nsga2(CvrpSuite(small_cvrp), population_size=8)
    algorithm.timer = StageTimer()
    rng = np.random.default_rng(0)
    algorithm.step(algorithm.initialize(rng), algorithm.static_params(), rng)
    assert {"ea_generation", "hypervolume"} <= set(algorithm.timer.get_usage_stats())


def single_particle_state(instance, position, velocity):
    objectives = Mopso(instance, 1).evaluate(position)
    particle = Particle(position, velocity, position.copy(), objectives)
    return SearchState(
        population=[Individual(particle, objectives)],
        archive=[Individual(position.copy(), objectives)],
        generation=0,
        nadir=objectives,
        hv_initial=0.0,
        hv_best=0.0,
        hv_current=0.0,
    )


def test_mopso_null_update(small_cvrp, rng):
    algorithm = Mopso(small_cvrp, population_size=6)
    state = algorithm.initialize(rng)
    moved = mopso_generation(state, MopsoParams(0.0, 0.0, 0.0), small_cvrp, rng)
    for old, new in zip(state.population, moved.population):
        assert not new.genome.velocity.any()
        assert np.array_equal(new.genome.position, old.genome.position)


def test_mopso_velocity_decays_by_inertia_at_rest(small_cvrp, rng):
    position = rng.random(small_cvrp.num_customers)
    velocity = np.full(small_cvrp.num_customers, 0.1)
    state = single_particle_state(small_cvrp, position, velocity)
    moved = mopso_generation(state, MopsoParams(2.0, 2.0, 0.5), small_cvrp, rng)
    assert np.allclose(moved.population[0].genome.velocity, 0.05)


def test_mopso_clamps_and_is_deterministic(small_cvrp):
    def run():
        algorithm = Mopso(small_cvrp, population_size=10)
        rng = np.random.default_rng(4)
        state = algorithm.initialize(rng)
        for _ in range(5):
            state = algorithm.step(state, MopsoParams(3.0, 3.0, 0.9), rng)
        return state

    state = run()
    for ind in state.population:
        p = ind.genome
        assert p.position.min() >= 0.0 and p.position.max() <= 1.0
        assert p.velocity.min() >= V_MIN and p.velocity.max() <= V_MAX
        assert not dominates(ind.objectives, p.best_objectives)
    assert not any(dominates(a.objectives, b.objectives) for a in state.archive for b in state.archive)
    assert multiset_of(state.population) == multiset_of(run().population)


def test_mopso_archive_limit(small_cvrp, rng):
    algorithm = Mopso(small_cvrp, population_size=20, archive_limit=3)
    state = algorithm.initialize(rng)
    for _ in range(5):
        state = algorithm.step(state, algorithm.static_params(), rng)
        assert len(state.archive) <= 3


def test_make_algorithm_rejects_bad_pairs(small_fjsp, small_cvrp):
    from errors import ConfigError

    with pytest.raises(ConfigError):
        make_algorithm("mopso", small_fjsp)
    with pytest.raises(ConfigError):
        make_algorithm("nsga2", small_cvrp, ObjectiveSet.PENTA)
    assert make_algorithm("mopso", small_cvrp).param_space.dim == 3
    assert make_algorithm("nsga2", small_fjsp).static_params() == Nsga2Params(0.7, 0.02)

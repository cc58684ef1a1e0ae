"""
Dual-vector FJSP encoding: machine selection + operation sequence

Machine selection holds, per flat operation, an index into that operation's
eligible-machine list. The operation sequence is a permutation of the job
multiset; the k-th occurrence of job i stands for operation O_{i,k}.
"""

from dataclasses import dataclass
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np

from errors import InfeasibleSolutionError
from problems import FjspInstance, ObjectiveSet, decode_schedule, evaluate_fjsp
from .base import OperatorSuite

GLOBAL_SHARE = 6
LOCAL_SHARE = 3


@dataclass(eq=False)
class FjspGenome:
    machine_selection: np.ndarray
    operation_sequence: np.ndarray

    def copy(self) -> "FjspGenome":
        return FjspGenome(self.machine_selection.copy(), self.operation_sequence.copy())

    def key(self) -> bytes:
        return self.machine_selection.tobytes() + b"|" + self.operation_sequence.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FjspGenome):
            return NotImplemented
        return np.array_equal(self.machine_selection, other.machine_selection) and np.array_equal(
            self.operation_sequence, other.operation_sequence
        )


def job_multiset(instance: FjspInstance) -> np.ndarray:
    return np.repeat(np.arange(instance.num_jobs), instance.ops_per_job)


def eligible_counts(instance: FjspInstance) -> np.ndarray:
    return np.array([len(e) for e in instance.eligible], dtype=np.int64)


def eligible_table(instance: FjspInstance) -> np.ndarray:
    """Machine ids padded into an (ops, max_choices) table"""
    width = max(len(e) for e in instance.eligible)
    table = np.full((instance.total_ops, width), -1, dtype=np.int64)
    for flat, machines in enumerate(instance.eligible):
        table[flat, : len(machines)] = machines
    return table


def validate_genome(instance: FjspInstance, genome: FjspGenome) -> None:
    """Raise InfeasibleSolutionError when the genome breaks an encoding invariant"""
    ms = genome.machine_selection
    if ms.shape != (instance.total_ops,):
        raise InfeasibleSolutionError("encoding", f"machine selection has {ms.size} genes, expected {instance.total_ops}")
    bad = np.flatnonzero((ms < 0) | (ms >= eligible_counts(instance)))
    if bad.size:
        raise InfeasibleSolutionError("eligibility", f"machine index out of range at operations {bad.tolist()}")
    if genome.operation_sequence.size and genome.operation_sequence.min() < 0:
        raise InfeasibleSolutionError("encoding", "operation sequence holds a negative job id")
    counts = np.bincount(genome.operation_sequence, minlength=instance.num_jobs)
    if counts.size != instance.num_jobs or not np.array_equal(counts, instance.ops_per_job):
        raise InfeasibleSolutionError("encoding", "operation sequence is not a permutation of the job multiset")


def _load_balanced_choice(instance: FjspInstance, flat: int, load: np.ndarray) -> int:
    """Index (within eligible list) of the machine minimizing load + processing time"""
    machines = instance.eligible[flat]
    times = instance.proc_time[flat, list(machines)]
    choice = int(np.argmin(load[list(machines)] + times))
    load[machines[choice]] += times[choice]
    return choice


def global_selection(instance: FjspInstance, rng: np.random.Generator) -> np.ndarray:
    """Machine selection minimizing accumulated machine load over all jobs, visited in random order"""
    selection = np.zeros(instance.total_ops, dtype=np.int64)
    load = np.zeros(instance.num_machines, dtype=np.int64)
    for job in rng.permutation(instance.num_jobs):
        for op in range(instance.ops_per_job[job]):
            flat = instance.flat_index(int(job), op)
            selection[flat] = _load_balanced_choice(instance, flat, load)
    return selection


def local_selection(instance: FjspInstance) -> np.ndarray:
    """Machine selection minimizing machine load within each job separately"""
    selection = np.zeros(instance.total_ops, dtype=np.int64)
    for job in range(instance.num_jobs):
        load = np.zeros(instance.num_machines, dtype=np.int64)
        for op in range(instance.ops_per_job[job]):
            flat = instance.flat_index(job, op)
            selection[flat] = _load_balanced_choice(instance, flat, load)
    return selection


def random_selection(instance: FjspInstance, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, eligible_counts(instance))


def init_population_fjsp(instance: FjspInstance, size: int, rng: np.random.Generator) -> List[FjspGenome]:
    """
    Initial genomes: 60% Global, 30% Local, remainder Random

    Shares are floored, so small populations lean towards Random. Operation
    sequences are uniform permutations of the job multiset.
    """
    n_global = size * GLOBAL_SHARE // 10
    n_local = size * LOCAL_SHARE // 10
    jobs = job_multiset(instance)
    genomes = []
    for i in range(size):
        if i < n_global:
            selection = global_selection(instance, rng)
        elif i < n_global + n_local:
            selection = local_selection(instance)
        else:
            selection = random_selection(instance, rng)
        genomes.append(FjspGenome(selection, rng.permutation(jobs)))
    return genomes


def two_point_crossover(a: np.ndarray, b: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    n = len(a)
    i, j = sorted(rng.choice(n + 1, size=2, replace=False)) if n > 0 else (0, 0)
    c1, c2 = a.copy(), b.copy()
    c1[i:j], c2[i:j] = b[i:j], a[i:j]
    return c1, c2


def uniform_crossover(a: np.ndarray, b: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    mask = rng.random(len(a)) < 0.5
    return np.where(mask, b, a), np.where(mask, a, b)


def pox(keep_from: np.ndarray, fill_from: np.ndarray, jobs: np.ndarray) -> np.ndarray:
    """
    Precedence-preserving order-based crossover for one child

    Jobs in `jobs` keep their positions from keep_from; the other positions take
    the remaining jobs in fill_from's relative order.
    """
    kept = np.isin(keep_from, jobs)
    child = keep_from.copy()
    child[~kept] = fill_from[~np.isin(fill_from, jobs)]
    return child


def crossover_fjsp(a: FjspGenome, b: FjspGenome, rng: np.random.Generator, num_jobs: Optional[int] = None) -> Tuple[FjspGenome, FjspGenome]:
    """
    Cross machine selection by two-point or uniform crossover (fair coin) and
    operation sequence by POX over a random job subset
    """
    if rng.random() < 0.5:
        m1, m2 = two_point_crossover(a.machine_selection, b.machine_selection, rng)
    else:
        m1, m2 = uniform_crossover(a.machine_selection, b.machine_selection, rng)
    if num_jobs is None:
        num_jobs = int(a.operation_sequence.max()) + 1
    subset = np.flatnonzero(rng.random(num_jobs) < 0.5)
    s1 = pox(a.operation_sequence, b.operation_sequence, subset)
    s2 = pox(b.operation_sequence, a.operation_sequence, subset)
    return FjspGenome(m1, s1), FjspGenome(m2, s2)


def mutate_fjsp(genome: FjspGenome, rate: float, rng: np.random.Generator, counts: np.ndarray) -> FjspGenome:
    """
    With probability rate: reassign one random operation to a random eligible
    machine and swap two random sequence positions
    """
    if rate <= 0.0 or rng.random() >= rate:
        return genome
    child = genome.copy()
    flat = int(rng.integers(len(child.machine_selection)))
    child.machine_selection[flat] = rng.integers(counts[flat])
    if len(child.operation_sequence) > 1:
        i, j = rng.choice(len(child.operation_sequence), size=2, replace=False)
        seq = child.operation_sequence
        seq[i], seq[j] = seq[j], seq[i]
    return child


class FjspSuite(OperatorSuite[FjspGenome]):
    """NSGA-II operator suite for FJSP"""

    def __init__(self, instance: FjspInstance, objective_set: ObjectiveSet = ObjectiveSet.BI, objective_scale: float = 1.0):
        super().__init__(objective_set.value, objective_scale)
        self.instance = instance
        self.objective_set = objective_set
        self._counts = eligible_counts(instance)
        self._table = eligible_table(instance)
        self._rows = np.arange(instance.total_ops)

    def initial_genomes(self, size: int, rng: np.random.Generator) -> List[FjspGenome]:
        return init_population_fjsp(self.instance, size, rng)

    def crossover(self, a: FjspGenome, b: FjspGenome, rng: np.random.Generator) -> Tuple[FjspGenome, FjspGenome]:
        return crossover_fjsp(a, b, rng, self.instance.num_jobs)

    def mutate(self, genome: FjspGenome, rate: float, rng: np.random.Generator) -> FjspGenome:
        return mutate_fjsp(genome, rate, rng, self._counts)

    def machines(self, genome: FjspGenome) -> np.ndarray:
        """Machine ids of every flat operation"""
        return self._table[self._rows, genome.machine_selection]

    def schedule(self, genome: FjspGenome):
        return decode_schedule(self.instance, self.machines(genome), genome.operation_sequence)

    def raw_objectives(self, genome: FjspGenome) -> np.ndarray:
        return evaluate_fjsp(self.instance, self.schedule(genome), self.objective_set, check=False)

    def key(self, genome: FjspGenome) -> Hashable:
        return genome.key()

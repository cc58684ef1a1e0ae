"""
Flexible job shop scheduling: instances, random generation, decoding and objective evaluation
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, ClassVar, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from errors import InfeasibleSolutionError, InstanceError
from .base import ObjectiveSet, ProblemInstance

logger = logging.getLogger(__name__)

INELIGIBLE = -1

OBJECTIVE_NAMES = ("makespan", "workload_balance", "avg_flowtime", "total_workload", "max_flowtime")


@dataclass(frozen=True)
class FjspGenConfig:
    """Inclusive sampling ranges for random FJSP instances"""

    ops_range: Tuple[int, int] = (4, 8)
    time_range: Tuple[int, int] = (2, 20)

    def validate(self) -> None:
        lo, hi = self.ops_range
        if lo > hi or lo < 1:
            raise InstanceError(f"ops_range must satisfy 1 <= min <= max, got {self.ops_range}")
        lo, hi = self.time_range
        if lo > hi or lo < 0:
            raise InstanceError(f"time_range must satisfy 0 <= min <= max, got {self.time_range}")


@dataclass(frozen=True, eq=False)
class FjspInstance(ProblemInstance):
    """
    An FJSP instance

    proc_time has one row per operation (jobs laid out consecutively, operations
    in precedence order) and one column per machine; INELIGIBLE marks machines
    the operation cannot run on.
    """

    kind: ClassVar[str] = "fjsp"

    num_jobs: int
    num_machines: int
    ops_per_job: Tuple[int, ...]
    proc_time: np.ndarray
    seed: int = 0

    def __post_init__(self):
        if self.num_jobs < 1 or self.num_machines < 1:
            raise InstanceError("num_jobs and num_machines must be positive")
        ops = tuple(int(k) for k in self.ops_per_job)
        if len(ops) != self.num_jobs or min(ops) < 1:
            raise InstanceError("ops_per_job needs one positive count per job")
        table = np.array(self.proc_time, dtype=np.int64)
        if table.shape != (sum(ops), self.num_machines):
            raise InstanceError(
                f"proc_time shape {table.shape} does not match ({sum(ops)}, {self.num_machines})"
            )
        if np.any(table < INELIGIBLE):
            raise InstanceError("processing times must be nonnegative")
        if np.any(np.all(table == INELIGIBLE, axis=1)):
            raise InstanceError("every operation needs at least one eligible machine")
        table.setflags(write=False)
        object.__setattr__(self, "ops_per_job", ops)
        object.__setattr__(self, "proc_time", table)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FjspInstance):
            return NotImplemented
        return (
            self.num_jobs == other.num_jobs
            and self.num_machines == other.num_machines
            and self.ops_per_job == other.ops_per_job
            and self.seed == other.seed
            and np.array_equal(self.proc_time, other.proc_time)
        )

    __hash__ = None

    @property
    def total_ops(self) -> int:
        return int(self.proc_time.shape[0])

    @property
    def size_label(self) -> str:
        return f"{self.num_jobs}j{self.num_machines}m"

    @cached_property
    def op_offsets(self) -> np.ndarray:
        """Flat index of each job's first operation"""
        return np.concatenate(([0], np.cumsum(self.ops_per_job)[:-1])).astype(np.int64)

    @cached_property
    def job_of_op(self) -> np.ndarray:
        return np.repeat(np.arange(self.num_jobs), self.ops_per_job)

    @cached_property
    def eligible(self) -> Tuple[Tuple[int, ...], ...]:
        """Eligible machine ids per flat operation, ascending"""
        return tuple(tuple(int(m) for m in np.flatnonzero(row != INELIGIBLE)) for row in self.proc_time)

    def flat_index(self, job: int, op: int) -> int:
        return int(self.op_offsets[job]) + op

    def time(self, job: int, op: int, machine: int) -> Optional[int]:
        """Processing time of O_{job,op} on machine, or None when ineligible"""
        t = int(self.proc_time[self.flat_index(job, op), machine])
        return None if t == INELIGIBLE else t

    def to_dict(self) -> Dict[str, Any]:
        nested = []
        for job in range(self.num_jobs):
            rows = []
            for op in range(self.ops_per_job[job]):
                row = self.proc_time[self.flat_index(job, op)]
                rows.append([None if t == INELIGIBLE else int(t) for t in row])
            nested.append(rows)
        return {
            "num_jobs": self.num_jobs,
            "num_machines": self.num_machines,
            "ops_per_job": list(self.ops_per_job),
            "proc_time": nested,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], seed: int = 0) -> "FjspInstance":
        try:
            rows = [
                [INELIGIBLE if t is None else int(t) for t in op_row]
                for job_rows in data["proc_time"]
                for op_row in job_rows
            ]
            return cls(
                num_jobs=int(data["num_jobs"]),
                num_machines=int(data["num_machines"]),
                ops_per_job=tuple(data["ops_per_job"]),
                proc_time=np.array(rows, dtype=np.int64).reshape(-1, int(data["num_machines"])),
                seed=seed,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InstanceError(f"malformed fjsp data: {e}")


class ScheduledOp(NamedTuple):
    job: int
    op: int
    machine: int
    start: int
    end: int


def generate_fjsp(seed: int, num_jobs: int, num_machines: int, cfg: Optional[FjspGenConfig] = None) -> FjspInstance:
    """
    Draw a random FJSP instance

    Each operation is eligible on a uniformly sized (1..num_machines) random
    machine subset with uniform integer processing times.

    Args:
        seed: Generation seed
        num_jobs: Number of jobs
        num_machines: Number of machines
        cfg: Sampling ranges (defaults: 4..8 operations, times 2..20)

    Returns:
        FjspInstance, identical for identical arguments
    """
    cfg = cfg or FjspGenConfig()
    cfg.validate()
    if num_jobs < 1 or num_machines < 1:
        raise InstanceError("num_jobs and num_machines must be positive")

    rng = np.random.default_rng(seed)
    ops_lo, ops_hi = cfg.ops_range
    t_lo, t_hi = cfg.time_range
    ops_per_job = rng.integers(ops_lo, ops_hi + 1, size=num_jobs)
    table = np.full((int(ops_per_job.sum()), num_machines), INELIGIBLE, dtype=np.int64)
    for row in table:
        k = int(rng.integers(1, num_machines + 1))
        machines = rng.choice(num_machines, size=k, replace=False)
        row[machines] = rng.integers(t_lo, t_hi + 1, size=k)

    return FjspInstance(
        num_jobs=num_jobs,
        num_machines=num_machines,
        ops_per_job=tuple(int(k) for k in ops_per_job),
        proc_time=table,
        seed=seed,
    )


def decode_schedule(instance: FjspInstance, machines: Sequence[int], sequence: Sequence[int]) -> List[ScheduledOp]:
    """
    Semi-active decoding of an (assignment, sequence) pair

    The k-th occurrence of job i in the sequence is operation O_{i,k}; it starts
    at the later of its job's previous completion and its machine's release.

    Args:
        instance: Problem instance
        machines: Machine id per flat operation
        sequence: Job-id multiset permutation

    Returns:
        Scheduled operations in decoding order
    """
    next_op = [0] * instance.num_jobs
    job_ready = [0] * instance.num_jobs
    mach_ready = [0] * instance.num_machines
    offsets = instance.op_offsets
    table = instance.proc_time
    schedule = []
    for job in sequence:
        job = int(job)
        op = next_op[job]
        flat = int(offsets[job]) + op
        m = int(machines[flat])
        p = int(table[flat, m])
        if p == INELIGIBLE:
            raise InfeasibleSolutionError("eligibility", f"O({job},{op}) cannot run on machine {m}")
        start = max(job_ready[job], mach_ready[m])
        end = start + p
        schedule.append(ScheduledOp(job, op, m, start, end))
        job_ready[job] = end
        mach_ready[m] = end
        next_op[job] = op + 1
    return schedule


def _check_schedule(instance: FjspInstance, schedule: Sequence[ScheduledOp]) -> None:
    seen = set()
    for s in schedule:
        if not (0 <= s.job < instance.num_jobs and 0 <= s.op < instance.ops_per_job[s.job]):
            raise InfeasibleSolutionError("completeness", f"unknown operation O({s.job},{s.op})")
        if (s.job, s.op) in seen:
            raise InfeasibleSolutionError("completeness", f"O({s.job},{s.op}) scheduled twice")
        seen.add((s.job, s.op))
        t = instance.time(s.job, s.op, s.machine) if 0 <= s.machine < instance.num_machines else None
        if t is None:
            raise InfeasibleSolutionError("eligibility", f"O({s.job},{s.op}) cannot run on machine {s.machine}")
        if s.start < 0 or s.end - s.start != t:
            raise InfeasibleSolutionError(
                "no preemption", f"O({s.job},{s.op}) spans {s.end - s.start}, expected {t}"
            )
    if len(seen) != instance.total_ops:
        raise InfeasibleSolutionError("completeness", f"{instance.total_ops - len(seen)} operation(s) unscheduled")

    by_job = sorted(schedule, key=lambda s: (s.job, s.op))
    for prev, cur in zip(by_job, by_job[1:]):
        if prev.job == cur.job and cur.start < prev.end:
            raise InfeasibleSolutionError(
                "precedence", f"O({cur.job},{cur.op}) starts at {cur.start} before O({prev.job},{prev.op}) ends at {prev.end}"
            )

    by_machine = sorted(schedule, key=lambda s: (s.machine, s.start, s.end))
    for prev, cur in zip(by_machine, by_machine[1:]):
        if prev.machine == cur.machine and cur.start < prev.end:
            raise InfeasibleSolutionError(
                "machine capacity",
                f"machine {cur.machine} runs O({prev.job},{prev.op}) and O({cur.job},{cur.op}) concurrently",
            )


def evaluate_fjsp(
    instance: FjspInstance,
    schedule: Sequence[ScheduledOp],
    objective_set: ObjectiveSet = ObjectiveSet.BI,
    check: bool = True,
) -> np.ndarray:
    """
    Objective vector of a schedule

    Returns [C_max, W_bal, F_avg, W_total, F_max] truncated to the active
    objective count.

    Args:
        instance: Problem instance
        schedule: Scheduled operations
        objective_set: Bi, Tri or Penta
        check: Validate feasibility first (decoder output is feasible by construction)

    Returns:
        Objective vector (minimization)
    """
    if check:
        _check_schedule(instance, schedule)

    workload = np.zeros(instance.num_machines, dtype=np.float64)
    first_start = np.full(instance.num_jobs, np.inf)
    last_end = np.zeros(instance.num_jobs, dtype=np.float64)
    for s in schedule:
        workload[s.machine] += s.end - s.start
        if s.start < first_start[s.job]:
            first_start[s.job] = s.start
        if s.end > last_end[s.job]:
            last_end[s.job] = s.end

    flow = last_end - first_start
    values = np.array(
        [
            last_end.max(),
            workload.max() - workload.min(),
            flow.mean(),
            workload.sum(),
            flow.max(),
        ],
        dtype=np.float64,
    )
    return values[: objective_set.value]

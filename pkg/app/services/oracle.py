"""
Brute-force checkers for the scheduler and the optimizer.

Both are exhaustive and guarded by size limits; they are test instruments,
not a production path.
"""
import itertools
import logging
import random
from typing import List, Optional, Sequence, Set, Tuple

import networkx as nx

from app.core.config import LookAhead, settings
from app.core.exceptions import TooLarge
from app.models.schemas import (
    Combination,
    OracleReport,
    PermissibleOrder,
    PlanItem,
    Process,
    RecipePlan,
    RequiresGraph,
)
from app.services.compression import optimize
from app.services.scheduling import build_requires_graph

logger = logging.getLogger(__name__)


def _ids(S: Sequence[Process]) -> List[str]:
    return [p.id for p in S]


def all_orders_bruteforce(S: Sequence[Process], g: RequiresGraph) -> Set[PermissibleOrder]:
    """Every permutation of S in which each requirement points backward"""
    if len(S) > settings.ORACLE_MAX_ORDERS_SIZE:
        raise TooLarge(len(S), settings.ORACLE_MAX_ORDERS_SIZE)
    ids = _ids(S)
    edges = [(a, b) for a, b in g.edges if a in ids and b in ids]
    orders = set()
    for permutation in itertools.permutations(ids):
        position = {process_id: index for index, process_id in enumerate(permutation)}
        if all(position[b] < position[a] for a, b in edges):
            orders.add(PermissibleOrder(order=permutation))
    return orders


def _assignments(S: Sequence[Process], g: RequiresGraph):
    """Yield host choices: position i maps to None (top level) or the index of its host.

    Only flat, capacity-respecting, pairwise-independent groups are produced.
    """
    n = len(S)
    target: List[Optional[int]] = [None] * n
    load = [0] * n
    hosted: List[List[int]] = [[] for _ in range(n)]

    def dependent(i: int, j: int) -> bool:
        return g.requires(S[i].id, S[j].id) or g.requires(S[j].id, S[i].id)

    def assign(i: int):
        if i == n:
            yield tuple(target)
            return
        target[i] = None
        yield from assign(i + 1)
        if hosted[i]:
            return
        for j in range(n):
            if j == i:
                continue
            # a host must stay at top level; an insertee can host nothing
            if j < i and target[j] is not None:
                continue
            if load[j] + S[i].time > S[j].f_time:
                continue
            if dependent(i, j) or any(dependent(i, k) for k in hosted[j]):
                continue
            target[i] = j
            load[j] += S[i].time
            hosted[j].append(i)
            yield from assign(i + 1)
            hosted[j].pop()
            load[j] -= S[i].time
            target[i] = None

    yield from assign(0)


def _item_graph(S: Sequence[Process], target: Sequence[Optional[int]], g: RequiresGraph) -> nx.DiGraph:
    """Arc from item b to item a whenever a member of a requires a member of b"""
    carrier = {p.id: (i if target[i] is None else target[i]) for i, p in enumerate(S)}
    digraph = nx.DiGraph()
    digraph.add_nodes_from(i for i in range(len(S)) if target[i] is None)
    for a, b in g.edges:
        if a in carrier and b in carrier and carrier[a] != carrier[b]:
            digraph.add_edge(carrier[b], carrier[a])
    return digraph


def _witness(S: Sequence[Process], target: Sequence[Optional[int]], digraph: nx.DiGraph) -> RecipePlan:
    items: List[PlanItem] = []
    for i in nx.lexicographical_topological_sort(digraph):
        insertees = tuple(S[k] for k in range(len(S)) if target[k] == i)
        if insertees:
            items.append(
                Combination(
                    host=S[i],
                    host_original_direction=S[i].direction,
                    insertees=insertees,
                    remaining_f_time=S[i].f_time - sum(q.time for q in insertees),
                )
            )
        else:
            items.append(S[i])
    return RecipePlan(items=tuple(items))


def min_makespan_bruteforce(S: Sequence[Process], g: RequiresGraph) -> Tuple[int, RecipePlan]:
    """Exhaustive minimum over every coherent flat plan.

    Insertions are not required to be contiguous. A plan exists for an
    assignment exactly when the graph between its top-level items is acyclic,
    and its total time does not depend on the order chosen.
    """
    if len(S) > settings.ORACLE_MAX_PLAN_SIZE:
        raise TooLarge(len(S), settings.ORACLE_MAX_PLAN_SIZE)
    S = list(S)
    if not S:
        return 0, RecipePlan()

    best: Optional[Tuple[int, RecipePlan]] = None
    for target in _assignments(S, g):
        makespan = sum(p.time for i, p in enumerate(S) if target[i] is None)
        if best is not None and makespan >= best[0]:
            continue
        digraph = _item_graph(S, target, g)
        if not nx.is_directed_acyclic_graph(digraph):
            continue
        best = (makespan, _witness(S, target, digraph))
    return best


def random_instance(
    rng: random.Random,
    size: int,
    edge_probability: float = 0.3,
    max_time: int = 600,
) -> Tuple[List[Process], RequiresGraph]:
    """Processes whose requires relation is exactly a random DAG over their positions"""
    processes = []
    for i in range(size):
        time = rng.randint(1, max_time)
        f_time = rng.randint(0, time)
        earlier = {f"s{j}" for j in range(i) if rng.random() < edge_probability}
        processes.append(
            Process(
                id=f"p{i}",
                label=f"step_{i}",
                input=frozenset({f"raw{i}"}) | earlier,
                output=frozenset({f"s{i}"}),
                time=time,
                f_time=f_time,
                direction=f"do step {i}",
            )
        )
    return processes, build_requires_graph(processes)


def compare(
    instance_id: str,
    S: Sequence[Process],
    g: Optional[RequiresGraph] = None,
    lookahead: Optional[LookAhead] = None,
) -> OracleReport:
    """Run the optimizer and the exhaustive search on one instance"""
    g = g or build_requires_graph(S)
    if len(S) > settings.ORACLE_MAX_PLAN_SIZE:
        raise TooLarge(len(S), settings.ORACLE_MAX_PLAN_SIZE)
    plan, makespan = optimize(list(S), graph=g, lookahead=lookahead)
    oracle_makespan, witness = min_makespan_bruteforce(S, g)
    report = OracleReport(
        instance_id=instance_id,
        optimizer_makespan=makespan,
        oracle_makespan=oracle_makespan,
        witness_plan=witness,
        optimizer_plan=plan,
        agrees=makespan == oracle_makespan,
    )
    if not report.agrees:
        logger.warning(f"Optimizer gives {makespan}s on {instance_id}; exhaustive search finds {oracle_makespan}s")
    return report

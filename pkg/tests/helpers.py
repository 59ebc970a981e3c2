"""Random network generators shared by the property tests."""

import itertools
import math

import numpy as np

from qlid.amplitude import Amplitude
from qlid.decision import DecisionProblem, UtilityTable
from qlid.network import AmplitudeCPT, AmplitudeNetwork, Variable, unobserved_configurations

TWO_PI = 2 * math.pi


def random_column(rng, arity, zero_prob=0.0, phased=True):
    p = rng.dirichlet(np.ones(arity))
    if zero_prob and rng.random() < zero_prob:
        p[rng.integers(arity)] = 0.0
        p = p / p.sum()
    phases = rng.uniform(0, TWO_PI, arity) if phased else np.zeros(arity)
    return tuple(Amplitude(math.sqrt(pi), ph) for pi, ph in zip(p, phases))


def random_network(rng, n_vars=None, max_arity=3, max_parents=2, zero_prob=0.0, phased=True):
    n_vars = n_vars or int(rng.integers(1, 6))
    variables = []
    cpts = []
    for i in range(n_vars):
        arity = int(rng.integers(2, max_arity + 1))
        var = Variable(f"V{i}", tuple(f"s{k}" for k in range(arity)))
        k = int(rng.integers(0, min(i, max_parents) + 1))
        parents = tuple(variables[j] for j in sorted(rng.choice(i, size=k, replace=False))) if k else ()
        keys = list(itertools.product(*(p.outcomes for p in parents)))
        table = {key: random_column(rng, arity, zero_prob, phased) for key in keys}
        variables.append(var)
        cpts.append(AmplitudeCPT(var, parents, table))
    return AmplitudeNetwork(tuple(variables), tuple(cpts))


def random_query(rng, net, evidence_prob=0.3):
    names = [v.name for v in net.variables]
    query = names[int(rng.integers(len(names)))]
    evidence = {}
    for v in net.variables:
        if v.name != query and rng.random() < evidence_prob:
            evidence[v.name] = v.outcomes[int(rng.integers(v.arity))]
    n = len(unobserved_configurations(net, query, evidence))
    phases = rng.uniform(0, TWO_PI, n)
    return query, evidence, phases


def random_two_node_problem(rng, n_actions=2, utility_scale=100.0):
    """X1 -> X2 with a binary chance parent, random CPTs and utilities."""
    x1 = Variable("X1", ("t", "f"))
    x2 = Variable("X2", tuple(f"z{k}" for k in range(int(rng.integers(2, 4)))))
    prior = AmplitudeCPT(x1, (), {(): random_column(rng, 2, phased=False)})
    cond = AmplitudeCPT(x2, (x1,), {(s,): random_column(rng, x2.arity, phased=False) for s in x1.outcomes})
    net = AmplitudeNetwork((x1, x2), (prior, cond))
    actions = tuple(f"a{k}" for k in range(n_actions))
    utility = UtilityTable(
        {(s, a): float(rng.uniform(-utility_scale, utility_scale)) for s in x1.outcomes for a in actions}
    )
    return DecisionProblem(net, actions, utility, "X1", "X2")

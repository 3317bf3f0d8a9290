"""Executable operad and scoperad laws, checked on random instances.

Equality is anchor isomorphism (canonical forms).  Each checker returns a
list of failing instances; an empty list means no counterexample was found.
"""

from __future__ import annotations

import random

from .canon import canonical_form
from .generators import random_dag, random_permutation, random_surjection
from .operad import block_map, block_permutation, identity, star, tau

__all__ = [
    "axiom1",
    "axiom2",
    "axiom3",
    "axiom4",
    "axiom5",
    "axiom5_literal",
    "LAWS",
    "check_laws",
]


def _small(rng: random.Random):
    return random_dag(rng, max_nodes=6, max_bas=3)


def _map(rng, n, surjective):
    return random_surjection(rng, n) if surjective else random_permutation(rng, n)


def _same(a, b) -> bool:
    return canonical_form(a) == canonical_form(b)


def axiom1(rng: random.Random, surjective: bool = False):
    """``τ_{σ∘σ'} = τ_σ ∘ τ_{σ'}``."""
    f = _small(rng)
    s1 = _map(rng, f.n, surjective)
    s2 = _map(rng, s1.m, surjective)
    lhs = tau(s2.after(s1), f)
    rhs = tau(s2, tau(s1, f))
    return None if _same(lhs, rhs) else {"f": f, "sigma'": s1.images, "sigma": s2.images}


def axiom2(rng: random.Random, surjective: bool = False):
    """``id ⋆ f = f ⋆ (id, ..., id) = f``."""
    f = _small(rng)
    ok = _same(star(identity(), [f]), f) and _same(star(f, [identity()] * f.n), f)
    return None if ok else {"f": f}


def axiom3(rng: random.Random, surjective: bool = False):
    """``f ⋆ (g_i ⋆ h_i) = (f ⋆ g) ⋆ h``."""
    f = random_dag(rng, max_nodes=4, max_bas=3)
    gs = [random_dag(rng, max_nodes=3, max_bas=2) for _ in range(f.n)]
    hs = [[random_dag(rng, max_nodes=3, max_bas=2) for _ in range(g.n)] for g in gs]
    lhs = star(f, [star(g, h) for g, h in zip(gs, hs)])
    rhs = star(star(f, gs), [h for hi in hs for h in hi])
    return None if _same(lhs, rhs) else {"f": f, "g": gs, "h": hs}


def axiom4(rng: random.Random, surjective: bool = False):
    """``f ⋆ (τ_{σ_i} g_i) = τ_{(σ_1, ..., σ_n)}(f ⋆ g)``."""
    f = random_dag(rng, max_nodes=5, max_bas=3)
    gs = [random_dag(rng, max_nodes=4, max_bas=3) for _ in range(f.n)]
    sigmas = [_map(rng, g.n, surjective) for g in gs]
    lhs = star(f, [tau(s, g) for s, g in zip(sigmas, gs)])
    rhs = tau(block_map(sigmas), star(f, gs))
    return None if _same(lhs, rhs) else {"f": f, "g": gs, "sigmas": [s.images for s in sigmas]}


def axiom5(rng: random.Random, surjective: bool = False):
    """``τ_σ(f) ⋆ g = τ_π(f ⋆ (g_σ(1), ..., g_σ(n)))`` with ``π`` the block permutation.

    Only defined for bijective ``σ``.  Without ``π`` the two sides are the
    same tree with differently ordered anchor blocks (see :func:`axiom5_literal`).
    """
    f = random_dag(rng, max_nodes=5, max_bas=3)
    gs = [random_dag(rng, max_nodes=4, max_bas=3) for _ in range(f.n)]
    s = random_permutation(rng, f.n)
    lhs = star(tau(s, f), gs)
    pi = block_permutation(s, [g.n for g in gs])
    rhs = tau(pi, star(f, [gs[s(i)] for i in range(f.n)]))
    return None if _same(lhs, rhs) else {"f": f, "g": gs, "sigma": s.images}


def axiom5_literal(rng: random.Random, surjective: bool = False):
    """The law without the block permutation; fails once blocks have unequal sizes."""
    f = random_dag(rng, max_nodes=5, max_bas=3)
    gs = [random_dag(rng, max_nodes=4, max_bas=3) for _ in range(f.n)]
    s = random_permutation(rng, f.n)
    lhs = star(tau(s, f), gs)
    rhs = star(f, [gs[s(i)] for i in range(f.n)])
    return None if _same(lhs, rhs) else {"f": f, "g": gs, "sigma": s.images}


LAWS: dict = {"1": axiom1, "2": axiom2, "3": axiom3, "4": axiom4, "5": axiom5}


def check_laws(samples: int = 200, seed: int = 0, surjective: bool = False, laws=None) -> dict:
    """Run each law on ``samples`` instances; returns ``{law: failures}``.

    With ``surjective`` the scoperad variants are run: laws 1 to 4 with
    surjections (law 5 stays bijective by definition).
    """
    out = {}
    for name, law in (laws or LAWS).items():
        rng = random.Random(f"{seed}-{name}-{surjective}")
        fails = []
        for _ in range(samples):
            r = law(rng, surjective)
            if r is not None:
                fails.append(r)
        out[name] = fails
    return out

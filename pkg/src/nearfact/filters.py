"""Arithmetic necessary conditions for a λ-fold near-factorization.

Each rule returns ``(verdict, reason)`` with verdict ``pass``, ``fail`` or
``n/a``.  All rules are evaluated and reported even after a failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .groups import Group, abelian_groups
from .numtheory import is_prime, prime_divisors

__all__ = ["RULES", "FilterReport", "check_all", "enumerate_feasible", "appendix_quadruples", "PASS", "FAIL", "NA"]

PASS, FAIL, NA = "pass", "fail", "n/a"

Verdict = tuple[str, str]


def _divisibility(G: Group, s: int, t: int, lam: int) -> Verdict:
    n = G.order
    if s * t == lam * (n - 1):
        return PASS, f"st = {s * t} = lambda(n-1)"
    return FAIL, f"st = {s * t} but lambda(n-1) = {lam * (n - 1)}"


def _sum(G: Group, s: int, t: int, lam: int) -> Verdict:
    if s + t <= G.order:
        return PASS, f"s+t = {s + t} <= n = {G.order}"
    return FAIL, f"s+t = {s + t} > n = {G.order}"


def _ratio(G: Group, s: int, t: int, lam: int) -> Verdict:
    if lam * (s + t - 1) <= s * t:
        return PASS, f"lambda <= st/(s+t-1) = {Fraction(s * t, s + t - 1)}"
    return FAIL, f"lambda = {lam} > st/(s+t-1) = {Fraction(s * t, s + t - 1)}"


def _min(G: Group, s: int, t: int, lam: int) -> Verdict:
    if min(s, t) <= 1:
        return NA, "min(s,t) = 1"
    bound = min(s - 1, t - 1)
    if lam <= bound:
        return PASS, f"lambda <= min(s-1,t-1) = {bound}"
    return FAIL, f"lambda = {lam} > min(s-1,t-1) = {bound}"


def _quarter(G: Group, s: int, t: int, lam: int) -> Verdict:
    bound = (s + t + 1) // 4
    if lam <= bound:
        return PASS, f"lambda <= floor((s+t+1)/4) = {bound}"
    return FAIL, f"lambda = {lam} > floor((s+t+1)/4) = {bound}"


def _n_quarter(G: Group, s: int, t: int, lam: int) -> Verdict:
    bound = (G.order + 1) // 4
    if lam <= bound:
        return PASS, f"lambda <= floor((n+1)/4) = {bound}"
    return FAIL, f"lambda = {lam} > floor((n+1)/4) = {bound}"


def _full_t(G: Group, s: int, t: int, lam: int) -> Verdict:
    n = G.order
    if max(s, t) != n - 1:
        return NA, "max(s,t) < n-1"
    if lam == 1 and min(s, t) == 1:
        return PASS, "trivial near-factorization shape"
    return FAIL, "max(s,t) = n-1 forces lambda = min(s,t) = 1"


def _n_minus_1_prime(G: Group, s: int, t: int, lam: int) -> Verdict:
    n = G.order
    if not is_prime(n - 1):
        return NA, f"n-1 = {n - 1} is not prime"
    if {s, t} == {1, n - 1} and lam == 1:
        return PASS, "trivial near-factorization shape"
    return FAIL, f"n-1 = {n - 1} is prime, so only the trivial shape exists"


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _factorization_bound(n: int, n1: int, n2: int) -> Fraction:
    quarter = Fraction(n + 1, 4)
    a = Fraction((n1 + 1) * (n - n2 + 1), 4 * n1)
    b = Fraction((n2 + 1) * (n - n1 + 1), 4 * n2)
    if n1 % 2 == 0 and n2 % 2 == 0:
        return quarter
    if n1 % 2 == 1 and n2 % 2 == 0:
        return a
    if n1 % 2 == 0 and n2 % 2 == 1:
        return b
    return min(a, b)


def _factorization(G: Group, s: int, t: int, lam: int) -> Verdict:
    n = G.order
    if min(s, t) <= 1:
        return NA, "min(s,t) = 1"
    seen = False
    for n1 in _divisors(n - 1):
        n2 = (n - 1) // n1
        if s % n1 or t % n2:
            continue
        l1, l2 = s // n1, t // n2
        if l1 * l2 != lam:
            continue
        seen = True
        bound = _factorization_bound(n, n1, n2)
        if lam > bound:
            return FAIL, f"n1={n1}, n2={n2}, lambda1={l1}, lambda2={l2}: lambda > {bound}"
    if not seen:
        return NA, "no matching factorization n-1 = n1 n2"
    return PASS, "every matching factorization respects its bound"


def _mod6(G: Group, s: int, t: int, lam: int) -> Verdict:
    n = G.order
    if n % 6 != 4:
        return NA, "n is not 4 mod 6"
    if 9 * lam <= 2 * n + 4:
        return PASS, f"lambda <= (2n+4)/9 = {Fraction(2 * n + 4, 9)}"
    return FAIL, f"lambda = {lam} > (2n+4)/9 = {Fraction(2 * n + 4, 9)}"


def _congruence(G: Group, s: int, t: int, lam: int) -> Verdict:
    inv = G.invariant_factors
    applied = []
    primes = sorted({p for m in inv for p in prime_divisors(m)})
    lam_primes = prime_divisors(lam) if lam > 1 else []
    for p in primes:
        rank = sum(1 for m in inv if m % p == 0)
        for mm in range(1, rank + 1):
            q = p**mm
            if not all(l % q in (1, q - 1) for l in lam_primes):
                continue
            if p % 2 == 1:
                if pow(s, p - 1, q) != 1 or pow(t, p - 1, q) != 1:
                    return FAIL, f"q = {p}^{mm}: need s^{p - 1} = t^{p - 1} = 1 mod {q}"
                applied.append(q)
                continue
            e = pow(lam, q - 1, q)
            pm = {1 % q, (q - 1) % q}
            if e == 1 % q:
                ok = s % q in pm and (s + t) % q == 0
                want = "s = -t = +-1"
            elif e == (q - 1) % q:
                ok = s % q in pm and (s - t) % q == 0
                want = "s = t = +-1"
            else:  # pragma: no cover - λ odd gives ±1 for q = 2, 4; larger q needs e in {±1}
                continue
            if not ok:
                return FAIL, f"q = {q}: need {want} mod {q}"
            applied.append(q)
    if not applied:
        return NA, "no prime-power modulus satisfies the divisor condition on lambda"
    return PASS, "holds for q in " + ",".join(map(str, applied))


RULES: list[tuple[str, Callable[[Group, int, int, int], Verdict]]] = [
    ("divisibility", _divisibility),
    ("sum", _sum),
    ("ratio", _ratio),
    ("min", _min),
    ("quarter", _quarter),
    ("n-quarter", _n_quarter),
    ("full-T", _full_t),
    ("n-1 prime", _n_minus_1_prime),
    ("factorization", _factorization),
    ("mod-6", _mod6),
    ("congruence", _congruence),
]


@dataclass
class FilterReport:
    group: Group
    s: int
    t: int
    lam: int
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    @property
    def failing(self) -> list[str]:
        return [name for name, (v, _) in self.verdicts.items() if v == FAIL]

    @property
    def feasible(self) -> bool:
        return not self.failing

    @property
    def overall(self) -> str:
        return "feasible" if self.feasible else f"infeasible ({self.failing[0]})"

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "n": self.group.order,
            "s": self.s,
            "t": self.t,
            "lambda": self.lam,
            "verdicts": {k: {"verdict": v, "reason": r} for k, (v, r) in self.verdicts.items()},
            "overall": self.overall,
            "feasible": self.feasible,
        }

    def to_text(self) -> str:
        lines = [f"{self.group.name} (n={self.group.order}), s={self.s}, t={self.t}, lambda={self.lam}"]
        w = max(len(k) for k in self.verdicts)
        for name, (v, why) in self.verdicts.items():
            lines.append(f"  {name:<{w}}  {v:<4}  {why}")
        lines.append(f"overall: {self.overall}")
        return "\n".join(lines)


def check_all(G: Group, s: int, t: int, lam: int) -> FilterReport:
    if min(s, t, lam) < 1:
        raise ValueError("s, t and lambda must be positive")
    rep = FilterReport(G, s, t, lam)
    for name, rule in RULES:
        rep.verdicts[name] = rule(G, s, t, lam)
    return rep


def enumerate_feasible(G: Group) -> list[tuple[int, int, int]]:
    """All ``(s, t, λ)`` with ``s <= t`` passing every rule."""
    n = G.order
    out = []
    for s in range(1, n):
        for t in range(s, n):
            if (s * t) % (n - 1):
                continue
            lam = s * t // (n - 1)
            if lam >= 1 and check_all(G, s, t, lam).feasible:
                out.append((s, t, lam))
    return out


def appendix_quadruples(max_order: int = 35, min_lambda: int = 2) -> list[tuple[Group, int, int, int]]:
    """Feasible quadruples with λ >= ``min_lambda`` off the boundary ``s+t ∈ {n-1, n}``."""
    out = []
    for n in range(2, max_order + 1):
        for G in abelian_groups(n):
            for s, t, lam in enumerate_feasible(G):
                if lam >= min_lambda and s + t not in (n - 1, n):
                    out.append((G, s, t, lam))
    return out

"""Named presentations: files in the corpus directory plus parametric families.

``g0_<n>_<p>``: free product of n cyclic groups of prime order p.
``hn_<k>``: <x_1..x_k | x_i^p1, (x_1 x_i)^p_i> with the first k primes.
``free_<n>``: free group of rank n.
"""
from __future__ import annotations

import os
import re
from pathlib import Path

from .presentations import Presentation, TorsionPresentation, parse_presentation

FIXTURE_ENV = "L2RANK_FIXTURES"


class UnknownFixture(KeyError):
    pass


def corpus_dir() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    return Path(env) if env else Path(__file__).with_name("fixtures")


def _primes(k: int) -> list[int]:
    out: list[int] = []
    n = 2
    while len(out) < k:
        if all(n % p for p in out):
            out.append(n)
        n += 1
    return out


def g0_presentation(n: int, p: int) -> TorsionPresentation:
    gens = ", ".join(f"x{i + 1}" for i in range(n))
    rels = ", ".join(f"x{i + 1}^{p}" for i in range(n))
    return parse_presentation(f"< {gens} | {rels} >")


def hn_presentation(n: int, primes: list[int] | None = None) -> TorsionPresentation:
    """Normal rank one: killing x1 kills every x_i since p_1 and p_i are coprime."""
    primes = primes or _primes(n)
    if n < 2 or len(primes) != n or len(set(primes)) != n:
        raise ValueError("need n >= 2 and n distinct primes")
    gens = ", ".join(f"x{i + 1}" for i in range(n))
    rels = [f"x{i + 1}^{primes[0]}" for i in range(n)]
    rels += [f"(x1*x{i + 1})^{primes[i]}" for i in range(1, n)]
    return parse_presentation(f"< {gens} | {', '.join(rels)} >")


def free_presentation(n: int) -> Presentation:
    gens = ", ".join(f"x{i + 1}" for i in range(n))
    return parse_presentation(f"< {gens} | >")


def read_presentation(path: str | Path) -> Presentation:
    lines = [l for l in Path(path).read_text(encoding="utf-8").splitlines()
             if not l.lstrip().startswith("#")]
    return parse_presentation("\n".join(lines))


def load_fixture(name: str) -> Presentation:
    stem = Path(name).name
    if stem.endswith(".grp"):
        stem = stem[:-4]
    path = corpus_dir() / f"{stem}.grp"
    if path.is_file():
        return read_presentation(path)
    if m := re.fullmatch(r"g0_(\d+)_(\d+)", stem):
        return g0_presentation(int(m[1]), int(m[2]))
    if m := re.fullmatch(r"hn_(\d+)", stem):
        return hn_presentation(int(m[1]))
    if m := re.fullmatch(r"free_(\d+)", stem):
        return free_presentation(int(m[1]))
    raise UnknownFixture(name)


def fixture_names() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.grp"))

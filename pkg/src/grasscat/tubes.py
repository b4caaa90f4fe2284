"""Syzygy orbits, AR sequences and the tube censuses for the tame pairs.

The translate on the stable category is inverse to the syzygy, so orbits
are computed by repeated syzygy steps.  Every orbit of a non-projective
rank-1 module or rigid rank-2 module is periodic with period dividing
2v, v = lcm(n, k)/k; members of rank at most two are identified exactly
(rims directly, rank-2 members by isomorphism against the canonical
extension modules), higher ranks are reported by rank and multiplicity
vector only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from math import lcm
from pathlib import Path
from typing import Optional, Union

from .errors import NotAlmostConsecutive, ProjectiveInput
from .homology import (is_isomorphic, is_rigid, rank2_extension,
                       rigid_indecomposable_rank2, syzygy)
from .modules import (CMModuleRep, Profile, a_vector, build_rank1,
                      default_truncation, direct_sum, rep_a_vector)
from .rims import (Rim, all_rims, ar_middle_profile, interlacing_degree,
                   is_almost_consecutive, is_projective, rim, shift,
                   syzygy_rim)

Seed = Union[Rim, Profile]


@dataclass(frozen=True)
class OrbitMember:
    """One module in a syzygy orbit, identified as far as its rank allows."""

    rank: int
    a_vec: tuple[int, ...]
    rim_label: Optional[Rim] = None
    profiles: tuple[Profile, ...] = ()

    def label(self) -> str:
        if self.rim_label is not None:
            return self.rim_label.label()
        if self.profiles:
            return self.profiles[0].label()
        return f"rk{self.rank}[" + ",".join(str(c) for c in self.a_vec) + "]"

    def sort_key(self) -> str:
        return self.label()

    def key(self):
        if self.rim_label is not None:
            return ("rim", self.rim_label.elements)
        if self.profiles:
            return ("class", tuple(p.label() for p in self.profiles))
        return ("opaque", self.rank, self.a_vec)

    def rotate(self, m: int, n: int, k: int) -> "OrbitMember":
        avec = tuple(self.a_vec[(i - m) % n] for i in range(n))
        return OrbitMember(
            rank=self.rank, a_vec=avec,
            rim_label=shift(self.rim_label, m) if self.rim_label else None,
            profiles=tuple(sorted((p.shift(m) for p in self.profiles),
                                  key=lambda p: p.label())))

    def matches_rim(self, r: Rim) -> bool:
        return self.rim_label == r

    def matches_profile(self, p: Profile) -> bool:
        return any(q == p for q in self.profiles)


@dataclass
class TauOrbit:
    """Members of one syzygy orbit, in translation order."""

    k: int
    n: int
    v: int
    members: list[OrbitMember]
    period: int

    def member_keys(self) -> set:
        return {m.key() for m in self.members}

    def to_json_dict(self) -> dict:
        return {
            "k": self.k, "n": self.n, "v": self.v, "period": self.period,
            "members": [
                {
                    "rank": m.rank,
                    "a_vector": list(m.a_vec),
                    "rim": list(m.rim_label.elements) if m.rim_label else None,
                    "profiles": [[list(r.elements) for r in p.layers]
                                 for p in m.profiles],
                    "label": m.label(),
                }
                for m in self.members
            ],
        }


def _seed_rep(seed: Seed, trunc: int) -> tuple[CMModuleRep, OrbitMember]:
    if isinstance(seed, Rim):
        if is_projective(seed):
            raise ProjectiveInput(f"{seed} is projective; its orbit is empty")
        rep = build_rank1(seed, trunc)
        return rep, OrbitMember(1, a_vector(Profile((seed,))).entries, rim_label=seed)
    layers = seed.layers
    if len(layers) == 1:
        return _seed_rep(layers[0], trunc)
    if len(layers) != 2:
        raise ValueError("orbit seeds are rank-1 rims or rank-2 profiles")
    rep = rank2_extension(layers[0], layers[1], trunc)
    member = _identify(rep, trunc)
    return rep, member


def _rank2_filtration_candidates(avec: tuple[int, ...], k: int, n: int) -> list[Profile]:
    """Ordered two-layer splits of a multiplicity vector, interlacing >= 3."""
    from itertools import combinations
    twos = [v + 1 for v, c in enumerate(avec) if c == 2]
    ones = [v + 1 for v, c in enumerate(avec) if c == 1]
    need = k - len(twos)
    if need < 0 or need > len(ones) or any(c > 2 for c in avec):
        return []
    out = []
    for chosen in combinations(ones, need):
        top = rim(twos + list(chosen), k, n)
        bottom = rim(twos + [x for x in ones if x not in chosen], k, n)
        if interlacing_degree(top, bottom) >= 3:
            out.append(Profile((top, bottom)))
    return out


def _identify(rep: CMModuleRep, trunc: int) -> OrbitMember:
    avec = rep_a_vector(rep).entries
    if rep.s == 1:
        from .modules import identify_rank1
        return OrbitMember(1, avec, rim_label=identify_rank1(rep))
    if rep.s == 2:
        matches = []
        for p in _rank2_filtration_candidates(avec, rep.k, rep.n):
            cand = rank2_extension(p.layers[0], p.layers[1], trunc)
            if is_isomorphic(rep, cand):
                matches.append(p)
        if matches:
            matches.sort(key=lambda p: p.label())
            return OrbitMember(2, avec, profiles=tuple(matches))
    return OrbitMember(rep.s, avec)


def tau_orbit(start: Seed, trunc: Optional[int] = None) -> TauOrbit:
    """Orbit of a rank-1 rim or rank-2 profile under the syzygy.

    Computes 2v consecutive syzygies, verifies the orbit closes, and
    reports the least period dividing 2v at which the identified member
    sequence repeats.
    """
    if isinstance(start, Rim):
        n, k = start.n, start.k
    else:
        n, k = start.n, start.k
    N = trunc if trunc is not None else default_truncation(n)
    v = lcm(n, k) // k
    rep, first = _seed_rep(start, N)
    members = [first]
    for _ in range(2 * v - 1):
        rep = syzygy(rep)
        members.append(_identify(rep, N))
    closing = _identify(syzygy(rep), N)
    if closing.key() != members[0].key():
        raise AssertionError(
            f"orbit of {members[0].label()} did not close after {2 * v} steps")
    period = 2 * v
    for d in sorted(_divisors(2 * v)):
        if all(members[i].key() == members[(i + d) % (2 * v)].key()
               for i in range(2 * v)):
            period = d
            break
    return TauOrbit(k, n, v, members[:period], period)


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@dataclass
class ARSequence:
    """Verified data of the AR sequence starting at an a.c. rim."""

    left: Rim
    right: Rim
    middle_profile: Optional[Profile]
    middle_projective_vertex: Optional[int]
    middle_extra_layer: Optional[Rim]
    middle_rigid: bool
    middle_indecomposable: bool
    exact: bool

    def middle_label(self) -> str:
        if self.middle_profile is not None:
            return self.middle_profile.label()
        return f"P_{self.middle_projective_vertex} + {self.middle_extra_layer.label()}"


def ar_sequence(r: Rim, trunc: Optional[int] = None) -> ARSequence:
    """AR sequence data for an almost consecutive non-projective rim.

    The middle term is built explicitly and checked: it must be rigid,
    the multiplicity vectors must add up (exactness), and it is
    indecomposable exactly when the two-interval decomposition is not the
    degenerate j = i + 2 case.
    """
    if is_projective(r):
        raise ProjectiveInput(f"{r} is projective")
    if is_almost_consecutive(r) is None:
        raise NotAlmostConsecutive(f"{r} is not almost consecutive")
    N = trunc if trunc is not None else default_truncation(r.n)
    right = syzygy_rim(r)
    middle = ar_middle_profile(r)
    total = [x + y for x, y in zip(a_vector(Profile((r,))).entries,
                                   a_vector(Profile((right,))).entries)]
    if middle.decomposes:
        proj = rim([(middle.proj_vertex + i) % r.n + 1 for i in range(r.k)],
                   r.k, r.n)
        rep = direct_sum(build_rank1(proj, N), build_rank1(middle.u, N))
        mid_avec = [x + y for x, y in zip(a_vector(Profile((proj,))).entries,
                                          a_vector(Profile((middle.u,))).entries)]
        return ARSequence(
            left=r, right=right, middle_profile=None,
            middle_projective_vertex=middle.proj_vertex,
            middle_extra_layer=middle.u,
            middle_rigid=is_rigid(rep),
            middle_indecomposable=False,
            exact=mid_avec == total)
    prof = Profile((middle.x, middle.y))
    rep = rank2_extension(middle.x, middle.y, N)
    rigid = rigid_indecomposable_rank2(middle.x, middle.y, N) is not None
    mid_avec = list(a_vector(prof).entries)
    return ARSequence(
        left=r, right=right, middle_profile=prof,
        middle_projective_vertex=None, middle_extra_layer=None,
        middle_rigid=rigid and is_rigid(rep),
        middle_indecomposable=interlacing_degree(middle.x, middle.y) >= 3,
        exact=mid_avec == total)


# ---------------------------------------------------------------------------
# tube census with figure fixtures


@dataclass
class FixtureCheck:
    tube: str
    row: int
    status: str          # matched / membership-ok / skipped-unseeded / MISMATCH
    detail: str = ""


@dataclass
class TubeCensusReport:
    k: int
    n: int
    v: int
    banner: Optional[str]
    orbits: list[TauOrbit]
    families: dict[str, list[int]]        # canonical family key -> orbit indices
    periods: dict[int, int]               # period -> orbit count
    mouth_family_periods: dict[int, int]  # from fixture-matched mouth rows
    fixture_checks: list[FixtureCheck] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def has_fixture_mismatch(self) -> bool:
        return any(c.status == "MISMATCH" for c in self.fixture_checks)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k, "n": self.n, "v": self.v, "banner": self.banner,
            "periods": {str(p): c for p, c in sorted(self.periods.items())},
            "mouth_family_periods": {str(p): c for p, c in
                                     sorted(self.mouth_family_periods.items())},
            "family_count": len(self.families),
            "orbits": [o.to_json_dict() for o in self.orbits],
            "fixture_checks": [
                {"tube": c.tube, "row": c.row, "status": c.status, "detail": c.detail}
                for c in self.fixture_checks],
            "notes": self.notes,
        }


TAME_PAIRS = ((3, 9), (4, 8))


def _load_fixture(k: int, n: int) -> Optional[dict]:
    name = f"tubes_{k}_{n}.json"
    try:
        path = resources.files("grasscat.fixtures").joinpath(name)
        return json.loads(path.read_text())
    except (FileNotFoundError, ModuleNotFoundError):
        return None


def tube_census(k: int, n: int, *, trunc: Optional[int] = None,
                census_report=None, progress: bool = False) -> TubeCensusReport:
    """Group rank-1 rims and rigid rank-2 classes into syzygy orbits.

    For the tame pairs the computed orbits are compared against the
    golden tube tables; other parameters are served with orbits only.
    Orbit periods must divide 2v.
    """
    N = trunc if trunc is not None else default_truncation(n)
    v = lcm(n, k) // k
    banner = None if (k, n) in TAME_PAIRS else "non-tame: orbits only"
    seeds: list[Seed] = [r for r in all_rims(k, n) if not is_projective(r)]
    if k >= 3:
        if census_report is None:
            from .census import run_census
            census_report = run_census(k, n, trunc=N)
        for entry in census_report.rank2_rigid:
            seeds.append(entry.profile)
    orbits: list[TauOrbit] = []
    seen_rims: set[tuple[int, ...]] = set()
    seen_profiles: set[str] = set()
    for idx, seed in enumerate(seeds):
        if isinstance(seed, Rim):
            if seed.elements in seen_rims:
                continue
        elif seed.label() in seen_profiles:
            continue
        orbit = tau_orbit(seed, trunc=N)
        orbits.append(orbit)
        for member in orbit.members:
            if member.rim_label is not None:
                seen_rims.add(member.rim_label.elements)
            for p in member.profiles:
                seen_profiles.add(p.label())
        if progress and (idx + 1) % 20 == 0:
            print(f"  tubes ({k},{n}): {idx + 1}/{len(seeds)} seeds")
    orbits.sort(key=lambda o: min(m.sort_key() for m in o.members))

    periods: dict[int, int] = {}
    for o in orbits:
        periods[o.period] = periods.get(o.period, 0) + 1
    bad = [o for o in orbits if (2 * v) % o.period != 0]
    notes = []
    if bad:
        notes.append(f"{len(bad)} orbits with period not dividing 2v")

    families: dict[str, list[int]] = {}
    for i, o in enumerate(orbits):
        families.setdefault(_family_key(o), []).append(i)

    report = TubeCensusReport(
        k=k, n=n, v=v, banner=banner, orbits=orbits, families=families,
        periods=periods, mouth_family_periods={}, notes=notes)
    fixture = _load_fixture(k, n)
    if fixture is not None and banner is None:
        _check_fixture(report, fixture, N)
    return report


def _family_key(o: TauOrbit) -> str:
    best = None
    for m_rot in range(o.n):
        labels = [mem.rotate(m_rot, o.n, o.k).sort_key() for mem in o.members]
        for start in range(len(labels)):
            cyc = tuple(labels[(start + i) % len(labels)] for i in range(len(labels)))
            cand = "|".join(cyc)
            if best is None or cand < best:
                best = cand
    return best or ""


def _entry_matches(entry: dict, member: OrbitMember, k: int, n: int) -> bool:
    if "rim" in entry:
        return member.matches_rim(rim(entry["rim"], k, n))
    if "profile" in entry:
        p = Profile(tuple(rim(ls, k, n) for ls in entry["profile"]))
        return member.matches_profile(p)
    if "rank" in entry:
        if member.rank != entry["rank"]:
            return False
        if "layers" in entry:
            layers = [rim(ls, k, n) for ls in entry["layers"]]
            expected = a_vector(Profile(tuple(layers))).entries
            return member.a_vec == expected
        return True
    return False


def _entry_is_seedable(entry: dict) -> bool:
    return "rim" in entry or "profile" in entry


def _check_fixture(report: TubeCensusReport, fixture: dict, trunc: int) -> None:
    k, n = report.k, report.n
    for tube in fixture["tubes"]:
        name = tube["name"]
        if tube.get("membership_only"):
            for pr in tube.get("projectives", []):
                ok = is_projective(rim(pr, k, n))
                report.fixture_checks.append(FixtureCheck(
                    name, -1, "membership-ok" if ok else "MISMATCH",
                    f"projective {pr}"))
            for entry in tube.get("members", []):
                found = any(
                    any(_entry_matches(entry, m, k, n) for m in o.members)
                    for o in report.orbits)
                report.fixture_checks.append(FixtureCheck(
                    name, -1, "membership-ok" if found else "MISMATCH",
                    json.dumps(entry, sort_keys=True)))
            continue
        for row_idx, row in enumerate(tube.get("rows", [])):
            entries = row["members"]
            if not any(_entry_is_seedable(e) for e in entries):
                report.fixture_checks.append(FixtureCheck(
                    name, row_idx, "skipped-unseeded",
                    "row shows only rank >= 3 modules"))
                continue
            matched = _match_row_to_orbit(report, entries, row.get("period"), k, n)
            status = "matched" if matched is not None else "MISMATCH"
            detail = f"orbit #{matched}" if matched is not None else \
                "no computed orbit aligns with this row"
            report.fixture_checks.append(FixtureCheck(name, row_idx, status, detail))
            if matched is not None and row.get("mouth"):
                p = report.orbits[matched].period
                report.mouth_family_periods[p] = \
                    report.mouth_family_periods.get(p, 0) + 1


def _match_row_to_orbit(report: TubeCensusReport, entries: list[dict],
                        period: Optional[int], k: int, n: int) -> Optional[int]:
    for idx, orbit in enumerate(report.orbits):
        if period is not None and orbit.period != period:
            continue
        p = orbit.period
        if len(entries) > p:
            continue
        for start in range(p):
            if all(_entry_matches(entries[i], orbit.members[(start + i) % p], k, n)
                   for i in range(len(entries))):
                return idx
    return None


def write_tube_report(report: TubeCensusReport, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"tubes-{report.k}-{report.n}.json"
    path.write_text(json.dumps(report.to_json_dict(), indent=1, sort_keys=True))
    return path


def orbit_from_json(data: dict) -> TauOrbit:
    """Reader for the orbit JSON document; inverse to ``to_json_dict``."""
    k, n = data["k"], data["n"]
    members = []
    for m in data["members"]:
        members.append(OrbitMember(
            rank=m["rank"],
            a_vec=tuple(m["a_vector"]),
            rim_label=rim(m["rim"], k, n) if m.get("rim") else None,
            profiles=tuple(Profile(tuple(rim(ls, k, n) for ls in prof))
                           for prof in m.get("profiles", []))))
    return TauOrbit(k, n, data["v"], members, data["period"])

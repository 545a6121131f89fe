"""Community labels, crossroads/subdivision roles, field co-citation spread,
and core/periphery splits of field communities."""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass, field

from .centrality import HubClassification, jenks_breaks
from .community import OverlappingCover, Partition
from .corpus import Taxonomy, parent_division
from .graph import Graph, connected_components

UNLABELED = "(unlabeled)"


@dataclass
class CommunityLabel:
    community_index: int
    terms: list[str]

    @property
    def label(self) -> str:
        return ", ".join(self.terms) if self.terms else UNLABELED


def top_terms(counter: Counter, n: int = 3) -> list[str]:
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return [t for t, _ in ranked[:n]]


def label_communities(cover: OverlappingCover, datasets, n_terms: int = 3) -> list[CommunityLabel]:
    """Label each community by its most frequent subject terms (ties alphabetical)."""
    by_id = {d.dataset_id: d for d in datasets}
    labels = []
    for idx, members in enumerate(cover.communities):
        counts = Counter()
        for n in members:
            counts.update(by_id[n].subject_terms)
        labels.append(CommunityLabel(idx, top_terms(counts, n_terms)))
    return labels


@dataclass
class MultiMembership:
    counts: dict
    at_least_two: set
    at_least_three: set


def multi_membership(cover: OverlappingCover) -> MultiMembership:
    counts = {n: len(idxs) for n, idxs in sorted(cover.membership.items())}
    return MultiMembership(
        counts,
        {n for n, c in counts.items() if c >= 2},
        {n for n, c in counts.items() if c >= 3},
    )


@dataclass
class SubdivisionEvidence:
    community_index: int
    size: int
    internal_weight: float
    boundary_weight: float
    exclusivity_ratio: float
    is_component_isolated: bool
    is_subdivision: bool


def identify_subdivisions(G: Graph, cover: OverlappingCover, min_ratio: float | None = None) -> list[SubdivisionEvidence]:
    """Score every community's exclusivity.

    ``exclusivity_ratio`` is internal edge weight over all weight incident to
    the members. By default a community is a subdivision iff it is exactly a
    connected component; pass ``min_ratio`` to use the ratio instead.
    """
    components = {frozenset(c) for c in connected_components(G)}
    out = []
    for idx, members in enumerate(cover.communities):
        internal, boundary = [], []
        for u in members:
            for v, w in G.adjacency(u).items():
                if v in members:
                    if u < v:
                        internal.append(w)
                else:
                    boundary.append(w)
        wi, wb = math.fsum(internal), math.fsum(boundary)
        ratio = wi / (wi + wb) if wi + wb > 0 else 1.0
        isolated = frozenset(members) in components
        flag = isolated if min_ratio is None else ratio >= min_ratio
        out.append(SubdivisionEvidence(idx, len(members), wi, wb, ratio, isolated, flag))
    return out


@dataclass
class CrossroadsEvidence:
    dataset_id: str
    membership_count: int
    degree: int
    betweenness: float
    in_high_both: bool

    @property
    def reasons(self) -> list[str]:
        why = []
        if self.membership_count >= 2:
            why.append("multi-membership")
        if self.in_high_both:
            why.append("high-degree-and-betweenness")
        return why


def identify_crossroads(cover: OverlappingCover, hubs: HubClassification) -> list[CrossroadsEvidence]:
    """Datasets in two or more communities, or in the top class of both centralities."""
    mm = multi_membership(cover)
    chosen = sorted(mm.at_least_two | hubs.high_both)
    return [
        CrossroadsEvidence(
            dataset_id=n,
            membership_count=mm.counts.get(n, 0),
            degree=int(hubs.degree.values.get(n, 0)),
            betweenness=hubs.betweenness.values.get(n, 0.0),
            in_high_both=n in hubs.high_both,
        )
        for n in chosen
    ]


@dataclass
class RoleReport:
    crossroads: list[CrossroadsEvidence]
    subdivisions: list[SubdivisionEvidence]
    multi_membership: dict

    @property
    def subdivision_communities(self) -> list[int]:
        return [s.community_index for s in self.subdivisions if s.is_subdivision]

    def as_dict(self) -> dict:
        return {
            "crossroads": [dict(asdict(c), reasons=c.reasons) for c in self.crossroads],
            "subdivisions": [asdict(s) for s in self.subdivisions if s.is_subdivision],
            "exclusivity": [asdict(s) for s in self.subdivisions],
            "multi_membership": {str(k): v for k, v in self.multi_membership.items() if v >= 2},
        }


def role_report(G: Graph, cover: OverlappingCover, hubs: HubClassification, min_ratio=None) -> RoleReport:
    return RoleReport(
        identify_crossroads(cover, hubs),
        identify_subdivisions(G, cover, min_ratio),
        multi_membership(cover).counts,
    )


# -- field-level statistics ----------------------------------------------------

@dataclass
class CocitationHistogram:
    counts: dict          # distinct divisions -> number of studies (>= 1 only)
    untagged: int         # studies whose citing publications carry no field codes
    lambda_mle: float
    per_study: dict = field(default_factory=dict, repr=False)

    @property
    def n_datasets(self) -> int:
        return sum(self.counts.values()) + self.untagged

    @property
    def mode(self) -> int | None:
        if not self.counts:
            return None
        return max(sorted(self.counts), key=lambda c: self.counts[c])


def _citing(links) -> dict:
    by_study = defaultdict(set)
    for l in links:
        by_study[l.study_id].add(l.publication_id)
    return by_study


def field_cocitation_histogram(links, publications, taxonomy: Taxonomy) -> CocitationHistogram:
    """How many studies are cited by 1, 2, ... distinct parent divisions."""
    pubs = {p.publication_id: p for p in publications}
    per_study = {}
    for sid, pids in sorted(_citing(links).items()):
        divs = set()
        for pid in pids:
            for code in pubs[pid].for_codes:
                divs.add(parent_division(code, taxonomy).code)
        per_study[sid] = len(divs)
    tagged = [c for c in per_study.values() if c > 0]
    counts = dict(sorted(Counter(tagged).items()))
    lam = math.fsum(tagged) / len(tagged) if tagged else 0.0
    return CocitationHistogram(counts, len(per_study) - len(tagged), lam, per_study)


@dataclass
class CommunitySpread:
    counts: dict          # number of field communities -> number of studies
    unassigned: int       # studies whose citing fields all fall outside the partition
    per_study: dict = field(default_factory=dict, repr=False)

    @property
    def denominator(self) -> int:
        return sum(self.counts.values())


def community_cocitation_spread(links, publications, partition: Partition) -> CommunitySpread:
    """Per study, the number of distinct field communities among its citing publications' fields."""
    pubs = {p.publication_id: p for p in publications}
    assign = partition.assignment
    per_study = {}
    for sid, pids in sorted(_citing(links).items()):
        comms = {assign[c] for pid in pids for c in pubs[pid].for_codes if c in assign}
        if any(pubs[pid].for_codes for pid in pids):
            per_study[sid] = len(comms)
    spread = Counter(c for c in per_study.values() if c > 0)
    unassigned = sum(1 for c in per_study.values() if c == 0)
    return CommunitySpread(dict(sorted(spread.items())), unassigned, per_study)


@dataclass
class FieldCommunity:
    community: int
    members: list
    strengths: dict
    core: list
    periphery: list
    divisions: list       # (division code, member count), most common first


def core_periphery(F: Graph, partition: Partition, n_classes: int, taxonomy: Taxonomy | None = None) -> list[FieldCommunity]:
    """Split each community's fields by strength into core (top natural-breaks
    class) and periphery (bottom class).

    Communities smaller than ``n_classes`` are reported whole as core. When a
    community has fewer distinct strengths than ``n_classes``, the class
    count drops to the number of distinct strengths; one class means all core.
    """
    out = []
    for idx, members in enumerate(partition.communities()):
        members = sorted(members)
        strengths = {n: math.fsum(F.adjacency(n).values()) for n in members}
        divs = Counter()
        if taxonomy is not None:
            for n in members:
                if n in taxonomy:
                    divs[parent_division(n, taxonomy).code] += 1
        k = min(n_classes, len(set(strengths.values())))
        if len(members) < n_classes or k <= 1:
            core, periphery = members, []
        else:
            cls = jenks_breaks([strengths[n] for n in members], k)
            core = [n for n, c in zip(members, cls.classes) if c == k - 1]
            periphery = [n for n, c in zip(members, cls.classes) if c == 0]
        core.sort(key=lambda n: (-strengths[n], n))
        periphery.sort(key=lambda n: (strengths[n], n))
        ranked_divs = sorted(divs.items(), key=lambda kv: (-kv[1], kv[0]))
        out.append(FieldCommunity(idx, members, strengths, core, periphery, ranked_divs))
    return out

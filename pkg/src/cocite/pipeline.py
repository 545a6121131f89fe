"""End-to-end pipeline: ingest -> build -> metrics -> communities -> roles -> layout.

Stage results are pickled under ``<out>/.cache`` keyed by a hash of the
input bytes and the parameters each stage reads, so changing one threshold
recomputes only the stages downstream of it. Outputs are staged in a
temporary directory and moved into place only when every requested stage
succeeded.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import pickle
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .analysis import (community_cocitation_spread, core_periphery, field_cocitation_histogram,
                       label_communities, multi_membership, role_report)
from .centrality import betweenness_all, classify_hubs, jenks_breaks, _worker_count
from .community import k_clique_communities, louvain, louvain_best_of
from .config import PipelineConfig
from .corpus import (count_year_unknown, filter_by_year, group_into_datasets, parent_division,
                     parse_corpus, read_taxonomy)
from .errors import CociteError, UndefinedMetricError, ValidationError
from .export import export_bipartite_csv, export_csv, export_dot, export_graphml, node_size
from .graph import (build_B, build_Bprime, connected_components, degree_assortativity, density,
                    mean_degree, project_cocitation, project_fields, threshold_edges, transitivity)
from .layout import spring_layout

log = logging.getLogger(__name__)

COMMANDS = ("ingest", "build", "metrics", "communities", "roles", "report", "layout", "all")

_NEEDS = {
    "ingest": ["ingest"],
    "build": ["ingest", "build"],
    "metrics": ["ingest", "build", "metrics"],
    "communities": ["ingest", "build", "communities"],
    "roles": ["ingest", "build", "metrics", "communities", "roles"],
    "report": ["ingest", "build", "metrics", "communities", "roles"],
    "layout": ["ingest", "build", "layout"],
    "all": ["ingest", "build", "metrics", "communities", "roles", "layout"],
}

# Parameters each stage reads, and the stages it consumes.
_PARAMS = {
    "ingest": ("min_year",),
    "build": ("s_min_weight", "f_min_weight"),
    "metrics": ("jenks_classes",),
    "communities": ("k", "louvain_seed", "louvain_runs", "resolution"),
    "roles": ("jenks_classes",),
    "layout": ("layout_iterations", "layout_seed"),
}
_UPSTREAM = {
    "ingest": (),
    "build": ("ingest",),
    "metrics": ("build",),
    "communities": ("build",),
    "roles": ("metrics", "communities"),
    "layout": ("build",),
}

# Published values for the ICPSR snapshot: (expected, tolerance).
REFERENCE = {
    "S.nodes": (998, 0),
    "S.edges": (3208, 0),
    "S.components": (80, 0),
    "S.density": (6.4e-3, 5e-4),
    "S.transitivity": (0.28, 0.01),
    "S.degree_assortativity": (-0.02, 0.01),
    "S.communities": (41, 2),
    "S.covered_datasets": (632, 10),
    "S.multi_membership": (20, 3),
}

ASSUMPTIONS = [
    "betweenness and hubs are computed on the thresholded dataset network",
    "shortest paths are hop counts; edge weights are ignored for betweenness",
    "field node size = ln(1 + number of tagged citing publications)",
    "field core/periphery ranks fields by strength (weighted degree)",
    "multi-membership 'more than two communities' means >= 3",
]


class StageError(CociteError):
    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 3 if isinstance(cause, OSError) else 1)
        super().__init__(f"stage {stage!r} failed: {cause}")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _fmt(x) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        if x.is_integer() and abs(x) < 1e15:
            return str(int(x))
        return format(x, ".12g")
    return str(x)


def _round(obj):
    """Round floats for JSON so outputs stay byte-stable across summation order."""
    if isinstance(obj, float):
        return float(format(obj, ".12g"))
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [_round(v) for v in sorted(obj)]
    return obj


# -- stages --------------------------------------------------------------------

def stage_ingest(cfg: PipelineConfig) -> dict:
    corpus = parse_corpus(cfg.citations, cfg.studies, cfg.publications)
    if not corpus.links:
        raise ValidationError("no links")
    taxonomy = read_taxonomy(cfg.taxonomy)
    unknown = sorted({c for p in corpus.publications for c in p.for_codes if c not in taxonomy})
    if unknown:
        raise ValidationError(f"field codes missing from taxonomy: {unknown[:20]}")
    links = filter_by_year(corpus.links, corpus.publications, cfg.min_year)
    if not links:
        raise ValidationError(f"no links left after min_year={cfg.min_year}")
    corpus.report.year_unknown = count_year_unknown(links, corpus.publications)
    corpus.report.filtered_by_year = len(corpus.links) - len(links)
    datasets, mapping = group_into_datasets(corpus.studies)
    return {"corpus": corpus, "links": links, "taxonomy": taxonomy,
            "datasets": datasets, "mapping": mapping}


def stage_build(cfg: PipelineConfig, ing: dict) -> dict:
    links, mapping = ing["links"], ing["mapping"]
    pubs = ing["corpus"].publications
    taxonomy = ing["taxonomy"]
    by_id = {d.dataset_id: d for d in ing["datasets"]}

    B = build_B(links, mapping)
    S_raw = project_cocitation(B)
    for n in S_raw.nodes:
        d = by_id[n]
        S_raw.add_node(n, name=d.display_name, kind=d.kind, n_studies=len(d.member_study_ids),
                       citations=len(B.left_neighbors(n)))
    S = threshold_edges(S_raw, cfg.s_min_weight, drop_isolated=True)

    Bp = build_Bprime(pubs, links)
    F_raw = project_fields(pubs, links)
    for f in F_raw.nodes:
        n_papers = len(Bp.left_neighbors(f))
        div = parent_division(f, taxonomy)
        F_raw.add_node(f, name=taxonomy.name(f), division=div.code, division_name=div.name,
                       n_papers=n_papers, size=node_size(n_papers))
    F = threshold_edges(F_raw, cfg.f_min_weight, drop_isolated=True)
    return {"B": B, "S_raw": S_raw, "S": S, "Bprime": Bp, "F_raw": F_raw, "F": F}


def _safe(fn, *args):
    try:
        return fn(*args)
    except UndefinedMetricError:
        return None


def graph_metrics(G) -> dict:
    return {
        "nodes": G.number_of_nodes(),
        "edges": G.number_of_edges(),
        "components": len(connected_components(G)),
        "density": _safe(density, G),
        "transitivity": _safe(transitivity, G),
        "degree_assortativity": _safe(degree_assortativity, G),
        "mean_degree": _safe(mean_degree, G),
    }


def stage_metrics(cfg: PipelineConfig, ing: dict, nets: dict) -> dict:
    B, S, F = nets["B"], nets["S"], nets["F"]
    table = {
        "B": {"nodes": len(B.left) + len(B.right), "nodes_left": len(B.left),
              "nodes_right": len(B.right), "edges": B.number_of_edges(),
              "components": len(B.components()), "density": _safe(density, B)},
        "S": dict(graph_metrics(S), nodes_pre_threshold=nets["S_raw"].number_of_nodes(),
                  edges_pre_threshold=nets["S_raw"].number_of_edges()),
        "F": dict(graph_metrics(F), nodes_pre_threshold=nets["F_raw"].number_of_nodes(),
                  edges_pre_threshold=nets["F_raw"].number_of_edges()),
    }
    s_btw = betweenness_all(S, normalized=True) if S.number_of_nodes() >= 3 else None
    f_btw = betweenness_all(F, normalized=True) if F.number_of_nodes() >= 3 else None
    hubs = classify_hubs(S, cfg.jenks_classes, s_btw) if s_btw else None

    series = {d.dataset_id: nets["S_raw"].node_attrs(d.dataset_id)["citations"]
              for d in ing["datasets"] if d.kind == "series" and d.dataset_id in nets["S_raw"]}
    series_breaks = None
    if series:
        ids = sorted(series)
        series_breaks = (ids, jenks_breaks([series[i] for i in ids], cfg.jenks_classes))
    return {"table": table, "S_betweenness": s_btw, "F_betweenness": f_btw, "hubs": hubs,
            "series_citations": series, "series_breaks": series_breaks}


def stage_communities(cfg: PipelineConfig, ing: dict, nets: dict) -> dict:
    S, F = nets["S"], nets["F"]
    cover = k_clique_communities(S, cfg.k)
    labels = label_communities(cover, ing["datasets"])
    partition = None
    if F.number_of_edges():
        if cfg.louvain_runs > 1:
            seeds = range(cfg.louvain_seed, cfg.louvain_seed + cfg.louvain_runs)
            partition = louvain_best_of(F, seeds, cfg.resolution)
        else:
            partition = louvain(F, cfg.louvain_seed, cfg.resolution)
    return {"cover": cover, "labels": labels, "partition": partition}


def stage_roles(cfg: PipelineConfig, ing: dict, nets: dict, met: dict, com: dict) -> dict:
    links, pubs, tax = ing["links"], ing["corpus"].publications, ing["taxonomy"]
    roles = role_report(nets["S"], com["cover"], met["hubs"]) if met["hubs"] else None
    hist = field_cocitation_histogram(links, pubs, tax)
    spread = cp = None
    if com["partition"] is not None:
        spread = community_cocitation_spread(links, pubs, com["partition"])
        cp = core_periphery(nets["F"], com["partition"], cfg.jenks_classes, tax)
    return {"roles": roles, "histogram": hist, "spread": spread, "core_periphery": cp,
            "multi": multi_membership(com["cover"])}


def stage_layout(cfg: PipelineConfig, nets: dict) -> dict:
    return {name: spring_layout(nets[name], cfg.layout_iterations, cfg.layout_seed)
            for name in ("S", "F")}


# -- cache -------------------------------------------------------------------

class StageCache:
    def __init__(self, root: Path, enabled: bool = True):
        self.root = root / ".cache"
        self.enabled = enabled

    def load(self, stage, key):
        p = self.root / f"{stage}-{key}.pkl"
        if not self.enabled or not p.exists():
            return None
        try:
            with open(p, "rb") as fh:
                return pickle.load(fh)
        except Exception:  # stale or truncated cache entries are recomputed
            return None

    def store(self, stage, key, value):
        if not self.enabled:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        for old in self.root.glob(f"{stage}-*.pkl"):
            old.unlink()
        tmp = self.root / f".{stage}-{key}.tmp"
        with open(tmp, "wb") as fh:
            pickle.dump(value, fh, protocol=pickle.HIGHEST_PROTOCOL)
        tmp.replace(self.root / f"{stage}-{key}.pkl")


def input_hashes(cfg: PipelineConfig) -> dict:
    out = {}
    for name in ("citations", "studies", "publications", "taxonomy"):
        p = getattr(cfg, name)
        out[name] = {"file": Path(p).name, "sha256": sha256_file(p)} if p else \
            {"file": "(bundled)", "sha256": _bundled_taxonomy_hash()}
    return out


def _bundled_taxonomy_hash() -> str:
    from importlib import resources
    ref = resources.files("cocite") / "data" / "for_taxonomy.csv"
    return hashlib.sha256(ref.read_bytes()).hexdigest()


def _stage_keys(cfg: PipelineConfig, hashes: dict) -> dict:
    keys = {}
    for stage in ("ingest", "build", "metrics", "communities", "roles", "layout"):
        payload = {
            "version": __version__,
            "stage": stage,
            "params": {p: getattr(cfg, p) for p in _PARAMS[stage]},
            "upstream": [keys[u] for u in _UPSTREAM[stage]],
        }
        if stage == "ingest":
            payload["inputs"] = hashes
        if stage == "metrics":
            payload["workers"] = _worker_count()
        blob = json.dumps(payload, sort_keys=True, default=str).encode()
        keys[stage] = hashlib.sha256(blob).hexdigest()[:20]
    return keys


# -- writers -------------------------------------------------------------------

def _write_csv(path: Path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    path.write_text(buf.getvalue(), encoding="utf-8")


def _write_json(path: Path, obj):
    path.write_text(json.dumps(_round(obj), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_ingest(d: Path, ing: dict):
    rows = []
    for ds in ing["datasets"]:
        rows.append([ds.dataset_id, ds.kind, len(ds.member_study_ids), ds.display_name,
                     ";".join(sorted(ds.member_study_ids))])
    _write_csv(d / "datasets.csv", ["dataset_id", "kind", "n_studies", "name", "studies"], rows)
    c = ing["corpus"]
    _write_json(d / "ingest.json", dict(
        c.report.as_dict(), studies=len(c.studies), publications=len(c.publications),
        links=len(ing["links"]), datasets=len(ing["datasets"]),
        series=sum(1 for x in ing["datasets"] if x.kind == "series"),
        publications_with_fields=sum(1 for p in c.publications if p.has_fields)))


def write_build(d: Path, nets: dict):
    nd = d / "networks"
    nd.mkdir(exist_ok=True)
    export_bipartite_csv(nets["B"], nd / "B.csv")
    export_bipartite_csv(nets["Bprime"], nd / "Bprime.csv")
    for name in ("S", "F"):
        G = nets[name]
        export_csv(G, nd / f"{name}.csv")
        export_graphml(G, nd / f"{name}.graphml")
        export_dot(G, nd / f"{name}.dot", name)
        _write_csv(nd / f"{name}_nodes.csv", ["node"] + sorted({k for n in G.nodes for k in G.node_attrs(n)}),
                   [[n] + [G.node_attrs(n).get(k) for k in
                           sorted({k for m in G.nodes for k in G.node_attrs(m)})] for n in G.nodes])


def write_metrics(d: Path, ing: dict, nets: dict, met: dict):
    table = met["table"]
    metrics = ["nodes", "nodes_left", "nodes_right", "nodes_pre_threshold", "edges",
               "edges_pre_threshold", "components", "density", "transitivity",
               "degree_assortativity", "mean_degree"]
    _write_csv(d / "metrics.csv", ["metric", "B", "S", "F"],
               [[m] + [table[g].get(m) for g in ("B", "S", "F")] for m in metrics])

    rows = []
    for net, key, G in (("S", "S_betweenness", nets["S"]), ("F", "F_betweenness", nets["F"])):
        btw = met[key]
        for n in G.nodes:
            rows.append([net, n, "degree", len(G.adjacency(n))])
            rows.append([net, n, "strength", sum(G.adjacency(n).values())])
            if btw:
                rows.append([net, n, "betweenness", btw.values[n]])
    _write_csv(d / "centrality.csv", ["network", "node", "metric", "value"], rows)

    hubs = met["hubs"]
    S = nets["S"]
    by_id = {x.dataset_id: x for x in ing["datasets"]}
    if hubs:
        rows = []
        for n in S.nodes:
            rows.append([n, "degree", hubs.degree.values[n], hubs.degree_breaks.classify(hubs.degree.values[n])])
            rows.append([n, "betweenness", hubs.betweenness.values[n],
                         hubs.betweenness_breaks.classify(hubs.betweenness.values[n])])
        _write_csv(d / "breaks.csv", ["node", "metric", "value", "class"], rows)
        chosen = sorted(hubs.high_degree | hubs.high_betweenness,
                        key=lambda n: (-hubs.betweenness.values[n], -hubs.degree.values[n], n))
        rows = []
        for n in chosen:
            ds = by_id[n]
            rows.append([n, ds.display_name, "; ".join(ds.investigators), hubs.betweenness.values[n],
                         hubs.degree.values[n], len(ds.member_study_ids),
                         S.node_attrs(n).get("citations"), n in hubs.high_degree,
                         n in hubs.high_betweenness, n in hubs.high_both])
        _write_csv(d / "hubs.csv", ["dataset_id", "name", "investigators", "betweenness", "degree",
                                    "studies_in_series", "citations", "high_degree",
                                    "high_betweenness", "high_both"], rows)
    if met["series_breaks"]:
        ids, br = met["series_breaks"]
        top = br.n_classes - 1
        rows = []
        for i, c in sorted(zip(ids, br.classes), key=lambda t: (-met["series_citations"][t[0]], t[0])):
            ds = by_id[i]
            rows.append([i, ds.display_name, "; ".join(ds.investigators), len(ds.member_study_ids),
                         met["series_citations"][i], c, c == top])
        _write_csv(d / "series_citations.csv", ["series_id", "name", "investigators",
                                                "studies_in_series", "citations", "class",
                                                "highly_cited"], rows)


def write_communities(d: Path, com: dict):
    _write_csv(d / "communities_S.csv", ["node", "community_index"], com["cover"].rows())
    _write_csv(d / "labels.csv", ["community_index", "size", "label"],
               [[l.community_index, len(com["cover"].communities[l.community_index]), l.label]
                for l in com["labels"]])
    if com["partition"] is not None:
        _write_csv(d / "communities_F.csv", ["node", "community_index"], com["partition"].rows())


def roles_json(ing, nets, met, com, rol) -> dict:
    cover, labels = com["cover"], com["labels"]
    out = {
        "communities": [{"index": i, "size": len(c), "members": sorted(c), "label": labels[i].label}
                        for i, c in enumerate(cover.communities)],
        "labels": [{"index": l.community_index, "terms": l.terms, "label": l.label} for l in labels],
        "uncovered": len(cover.uncovered),
        "k": cover.k,
        "crossroads": [], "subdivisions": [], "exclusivity": [], "multi_membership": {},
    }
    if rol["roles"]:
        out.update(rol["roles"].as_dict())
    out["more_than_two_communities"] = sorted(rol["multi"].at_least_three)
    h = rol["histogram"]
    out["histograms"] = {
        "field_divisions": {"counts": h.counts, "untagged": h.untagged,
                            "lambda_mle": h.lambda_mle, "mode": h.mode, "datasets": h.n_datasets},
    }
    if rol["spread"] is not None:
        s = rol["spread"]
        out["histograms"]["community_spread"] = {"counts": s.counts, "unassigned": s.unassigned,
                                                 "denominator": s.denominator}
    if com["partition"] is not None:
        p = com["partition"]
        out["field_partition"] = {"communities": p.n_communities, "modularity": p.modularity,
                                  "levels": p.levels, "seed": p.seed}
    if rol["core_periphery"] is not None:
        out["field_communities"] = [
            {"community": fc.community, "members": fc.members, "core": fc.core,
             "periphery": fc.periphery, "divisions": [list(x) for x in fc.divisions],
             "strengths": fc.strengths}
            for fc in rol["core_periphery"]]
    out["assumptions"] = ASSUMPTIONS
    return out


def write_roles(d: Path, ing, nets, met, com, rol):
    _write_json(d / "roles.json", roles_json(ing, nets, met, com, rol))
    if rol["roles"]:
        _write_csv(d / "crossroads.csv", ["dataset_id", "membership_count", "degree", "betweenness",
                                          "in_high_both", "reasons"],
                   [[c.dataset_id, c.membership_count, c.degree, c.betweenness, c.in_high_both,
                     ";".join(c.reasons)] for c in rol["roles"].crossroads])
        _write_csv(d / "subdivisions.csv", ["community_index", "size", "label", "exclusivity_ratio",
                                            "component_isolated", "subdivision"],
                   [[s.community_index, s.size, com["labels"][s.community_index].label,
                     s.exclusivity_ratio, s.is_component_isolated, s.is_subdivision]
                    for s in rol["roles"].subdivisions])
    h = rol["histogram"]
    rows = [["field_divisions", c, n] for c, n in h.counts.items()] + [["field_divisions", "untagged", h.untagged]]
    if rol["spread"] is not None:
        rows += [["community_spread", c, n] for c, n in rol["spread"].counts.items()]
        rows += [["community_spread", "unassigned", rol["spread"].unassigned]]
    _write_csv(d / "histograms.csv", ["histogram", "bin", "datasets"], rows)
    if rol["core_periphery"] is not None:
        F = nets["F"]
        rows = []
        for fc in rol["core_periphery"]:
            for n in fc.members:
                pos = "core" if n in fc.core else "periphery" if n in fc.periphery else "middle"
                rows.append([fc.community, n, F.node_attrs(n).get("name"), fc.strengths[n], pos])
        _write_csv(d / "core_periphery.csv", ["community", "field", "name", "strength", "position"], rows)


def write_layout(d: Path, lay: dict):
    for name, res in lay.items():
        _write_csv(d / f"layout_{name}.csv", ["node", "x", "y"], res.rows())


def reference_check(met: dict, com: dict, rol: dict) -> dict:
    s = met["table"]["S"]
    observed = {
        "S.nodes": s["nodes"], "S.edges": s["edges"], "S.components": s["components"],
        "S.density": s["density"], "S.transitivity": s["transitivity"],
        "S.degree_assortativity": s["degree_assortativity"],
        "S.communities": len(com["cover"].communities),
        "S.covered_datasets": len(com["cover"].membership),
        "S.multi_membership": len(rol["multi"].at_least_two),
    }
    rows = []
    for key, (expected, tol) in REFERENCE.items():
        obs = observed[key]
        ok = obs is not None and abs(obs - expected) <= tol + 1e-12
        rows.append({"metric": key, "expected": expected, "tolerance": tol, "observed": obs,
                     "within": ok})
    bad = [r["metric"] for r in rows if not r["within"]]
    diagnosis = None
    if bad:
        diagnosis = (f"{len(bad)} metric(s) outside tolerance: {', '.join(bad)}. The published "
                     "values come from one bibliography snapshot; the bibliography grows "
                     "continuously, so snapshot-version drift is the expected cause. Check "
                     "min_year and thresholds in the config before suspecting the pipeline.")
    return {"checks": rows, "all_within": not bad, "diagnosis": diagnosis}


def summary_text(ing, met, com, rol) -> str:
    c = ing["corpus"]
    t = met["table"]
    lines = ["cocite run summary", "=" * 18, ""]
    lines.append(f"studies {len(c.studies)}, publications {len(c.publications)}, "
                 f"links {len(ing['links'])} (duplicates collapsed {c.report.duplicate_links}, "
                 f"filtered by year {c.report.filtered_by_year}, year unknown {c.report.year_unknown})")
    lines.append("")
    lines.append(f"{'metric':<22}{'B':>14}{'S':>14}{'F':>14}")
    for m in ("nodes", "edges", "components", "density", "transitivity", "degree_assortativity"):
        lines.append(f"{m:<22}" + "".join(f"{_fmt(_r(t[g].get(m))):>14}" for g in ("B", "S", "F")))
    lines.append("")
    hubs = met["hubs"]
    if hubs:
        lines.append("hubs (high degree and betweenness): " + (", ".join(sorted(hubs.high_both)) or "none"))
    cover = com["cover"]
    lines.append(f"k-clique communities (k={cover.k}): {len(cover.communities)}, covered datasets "
                 f"{len(cover.membership)}, in >=2 communities {len(rol['multi'].at_least_two)}")
    for lab in com["labels"]:
        lines.append(f"  [{lab.community_index}] n={len(cover.communities[lab.community_index])}: {lab.label}")
    if rol["roles"]:
        lines.append("crossroads: " + (", ".join(x.dataset_id for x in rol["roles"].crossroads) or "none"))
        lines.append("subdivisions: " + (", ".join(map(str, rol["roles"].subdivision_communities)) or "none"))
    if com["partition"] is not None:
        p = com["partition"]
        lines.append(f"field communities (Louvain, seed {p.seed}): {p.n_communities}, Q={_fmt(_r(p.modularity))}")
    h = rol["histogram"]
    lines.append(f"divisions per study: {h.counts} untagged {h.untagged} mean {_fmt(_r(h.lambda_mle))}")
    return "\n".join(lines) + "\n"


def _r(x):
    return round(x, 4) if isinstance(x, float) else x


# -- driver --------------------------------------------------------------------

@dataclass
class RunResult:
    out: Path
    files: list
    manifest: dict
    stages: dict


def run_pipeline(cfg: PipelineConfig, command: str = "all", use_cache: bool = True) -> RunResult:
    """Run the stages ``command`` needs and write their outputs under ``cfg.out``."""
    if command not in COMMANDS:
        raise ValueError(f"unknown command {command!r}")
    cfg.validate()
    out = Path(cfg.out)
    fresh = not out.exists()
    try:
        return _run(cfg, command, use_cache, out)
    except CociteError:
        if fresh:
            shutil.rmtree(out, ignore_errors=True)
        raise


def _run(cfg: PipelineConfig, command: str, use_cache: bool, out: Path) -> RunResult:
    try:
        out.mkdir(parents=True, exist_ok=True)
        hashes = input_hashes(cfg)
    except OSError as exc:
        raise StageError("ingest", exc) from exc
    keys = _stage_keys(cfg, hashes)
    cache = StageCache(out, use_cache)
    results: dict = {}

    def run(stage, fn, *args):
        cached = cache.load(stage, keys[stage])
        if cached is not None:
            log.info("stage %s: cached", stage)
            results[stage] = cached
            return
        log.info("stage %s: computing", stage)
        try:
            results[stage] = fn(cfg, *args)
        except (CociteError, OSError) as exc:
            raise StageError(stage, exc) from exc
        cache.store(stage, keys[stage], results[stage])

    needs = _NEEDS[command]
    run("ingest", stage_ingest)
    if "build" in needs:
        run("build", stage_build, results["ingest"])
    if "metrics" in needs:
        run("metrics", stage_metrics, results["ingest"], results["build"])
    if "communities" in needs:
        run("communities", stage_communities, results["ingest"], results["build"])
    if "roles" in needs:
        run("roles", stage_roles, results["ingest"], results["build"], results["metrics"],
            results["communities"])
    if "layout" in needs:
        run("layout", stage_layout, results["build"])

    tmp = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
    try:
        stage = "write"
        ing = results["ingest"]
        write_ingest(tmp, ing)
        if "build" in needs:
            write_build(tmp, results["build"])
        if "metrics" in needs:
            write_metrics(tmp, ing, results["build"], results["metrics"])
        if "communities" in needs:
            write_communities(tmp, results["communities"])
        if "roles" in needs:
            write_roles(tmp, ing, results["build"], results["metrics"], results["communities"],
                        results["roles"])
        if command in ("report", "all"):
            (tmp / "summary.txt").write_text(summary_text(ing, results["metrics"], results["communities"],
                                                          results["roles"]), encoding="utf-8")
        if "layout" in needs:
            write_layout(tmp, results["layout"])

        files = sorted(p.relative_to(tmp).as_posix() for p in tmp.rglob("*") if p.is_file())
        manifest = {
            "tool": "cocite",
            "version": __version__,
            "command": command,
            "config": {k: (Path(v).name if k in ("citations", "studies", "publications", "taxonomy")
                           and v is not None else v)
                       for k, v in cfg.as_dict().items() if k != "out"},
            "inputs": hashes,
            "stage_keys": {s: keys[s] for s in needs},
            "outputs": {f: sha256_file(tmp / f) for f in files},
            "assumptions": ASSUMPTIONS,
            "display": {"field_node_size": "ln(1 + n_papers)", "log_base": "e"},
        }
        if cfg.compare_reference and "roles" in needs:
            manifest["reference_check"] = reference_check(results["metrics"], results["communities"],
                                                          results["roles"])
        _write_json(tmp / "manifest.json", manifest)
        files.append("manifest.json")
        for f in files:
            dest = out / f
            dest.parent.mkdir(parents=True, exist_ok=True)
            os.replace(tmp / f, dest)
    except OSError as exc:
        raise StageError(stage, exc) from exc
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
    return RunResult(out, sorted(files), manifest, results)

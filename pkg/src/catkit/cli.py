"""Command-line driver.

Exit status is 0 on success, 1 on invalid input or a failed check, and 2
when a search exceeds the candidate bound.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

import numpy as np

from . import categories as cat
from . import categorify as cz
from . import cohomology as coh
from . import extensions as ext
from . import groups as grp
from . import nerve as nv
from . import smallgroups
from . import topology as top
from .config import DEFAULT_MAX_CANDIDATES, ENV_VAR, Limits
from .errors import CatkitError, SizeLimit
from .io import dump_pair, dumps, load_coefficients, load_extension, load_group, load_pair, load_space


class UsageError(CatkitError):
    """Unknown subcommand or malformed arguments."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Output:
    def __init__(self, stream):
        self.stream = stream

    def line(self, text: str = "") -> None:
        self.stream.write(text + "\n")

    def raw(self, text: str) -> None:
        self.stream.write(text)


def _ints(text: str) -> list:
    return [int(t) for t in text.replace(",", " ").split()]


def _map(a) -> str:
    return "[" + ", ".join(str(int(v)) for v in np.asarray(a).reshape(-1)) + "]"


def _category(args, limits):
    """The category named by ``--flavor/--group`` or ``--space``, with optional monoidal data."""
    if getattr(args, "space", None):
        return top.open_set_category(load_space(args.space))
    G = load_group(args.group)
    if args.flavor == "tautological":
        return cz.tautological(G), None
    if args.flavor == "discrete":
        return cz.discrete(G)
    return cz.simplicial(G)


def _category_json(C, M) -> dict:
    out = {
        "objects": list(C.object_names) if C.object_names else list(range(C.object_count)),
        "src": C.src.tolist(),
        "tgt": C.tgt.tolist(),
        "identities": C.identities.tolist(),
        "comp": C.comp.tolist(),
    }
    if M is not None:
        out["unit"] = int(M.unit)
        out["tensor_obj"] = np.asarray(M.tensor_obj).tolist()
    return out


# --------------------------------------------------------------------------- group commands


def cmd_group_info(args, out, limits):
    G = load_group(args.group)
    info = {
        "order": G.order,
        "name": smallgroups.identify(G),
        "abelian": G.is_abelian(),
        "element_orders": G.element_orders.tolist(),
        "center": G.center(),
        "commutator_subgroup": G.commutator_subgroup(),
        "generators": list(G.generators),
    }
    if args.emit == "json":
        info["table"] = G.table.tolist()
        out.raw(dumps(info))
        return 0
    for k, v in info.items():
        out.line(f"{k}: {v}")
    return 0


def cmd_homs(args, out, limits):
    G, H = load_group(args.source), load_group(args.target)
    homs = (grp.enumerate_homs_bruteforce if args.brute else grp.enumerate_homs)(G, H, limits)
    if args.emit == "json":
        out.raw(dumps([list(f.key()) for f in homs]))
        return 0
    out.line(f"{len(homs)} homomorphisms")
    for f in homs:
        out.line(_map(f.map))
    return 0


def cmd_hom_classes(args, out, limits):
    G, H = load_group(args.source), load_group(args.target)
    classes = grp.hom_conjugacy_classes(G, H, limits)
    lifts = [cz.lift_hom(f, "tautological") for f in grp.enumerate_homs(G, H, limits)]
    functor_classes = cat.homotopy_classes(lifts, limits)
    if args.emit == "json":
        out.raw(dumps({
            "classes": [[list(f.key()) for f in c] for c in classes],
            "functor_classes": len(functor_classes),
        }))
        return 0
    out.line(f"{len(classes)} conjugacy classes")
    for c in classes:
        out.line(f"{_map(c[0].map)} (size {len(c)})")
    out.line(f"functor homotopy classes: {len(functor_classes)}")
    return 0


def cmd_aut(args, out, limits):
    G = load_group(args.group)
    A = grp.automorphisms(G, limits)
    functors = [cz.lift_hom(f, "tautological") for f in A.aut]
    via_functors = len(cat.homotopy_classes(functors, limits))
    res = {"aut": len(A.aut), "inner": sum(A.inner), "out": A.outer_class_count, "out_via_functors": via_functors}
    if args.emit == "json":
        out.raw(dumps(res))
        return 0
    out.line(f"|Aut| = {res['aut']}")
    out.line(f"|Inn| = {res['inner']}")
    out.line(f"|Out| = {res['out']}")
    out.line(f"|Out| via functor classes = {via_functors}")
    return 0


# --------------------------------------------------------------------------- categorification


def cmd_categorify(args, out, limits):
    G = load_group(args.group)
    if args.flavor == "tautological":
        C, M = cz.tautological(G), None
    elif args.flavor == "discrete":
        C, M = cz.discrete(G)
    else:
        C, M = cz.simplicial(G)
    if args.emit == "dot":
        out.raw(cat.to_dot(C, args.flavor, identities=True))
        return 0
    if args.emit == "json":
        out.raw(dumps(_category_json(C, M)))
        return 0
    out.line(f"flavor: {args.flavor}")
    out.line(f"objects: {C.object_count}")
    out.line(f"morphisms: {C.morphism_count}")
    out.line(f"valid: {cat.category_violation(C) is None}")
    out.line(f"groupoid: {cat.is_groupoid(C)}")
    if M is not None:
        out.line(f"monoidal: {cat.check_monoidal(M)}")
    P = cat.pi0(C, M)
    out.line(f"pi0 classes: {P.class_count}")
    if args.flavor == "simplicial":
        h = cz.contraction_homotopy(G, 0)
        out.line(f"contraction natural: {cat.check_natural(h)}")
    return 0


def cmd_covering(args, out, limits):
    G = load_group(args.group)
    R = cz.covering_transformation(G)
    ok_functor = cat.check_functor(R)
    biequi = cz.check_biequivariance(G)
    if args.emit == "json":
        out.raw(dumps({"mor_map": R.mor_map.tolist(), "functor": ok_functor, "biequivariant": biequi}))
        return 0
    n = G.order
    for m in range(n * n):
        out.line(f"{G.label(m // n)} -> {G.label(m % n)}  |->  {G.label(int(R.mor_map[m]))}")
    out.line(f"functor: {ok_functor}")
    out.line(f"biequivariant: {biequi}")
    return 0 if ok_functor and biequi else 1


# --------------------------------------------------------------------------- extensions


def _section(E, text):
    return ext.canonical_section(E) if text is None else ext.make_section(E, _ints(text))


def cmd_bundle(args, out, limits):
    E = load_extension(args.extension)
    B = ext.bundle_categorify(E)
    sf = ext.section_monoidal_functor(E, _section(E, args.section), B)
    R = ext.bundle_covering(E, B)
    res = {
        "objects": B.category.object_count,
        "morphisms": B.category.morphism_count,
        "monoidal": cat.check_monoidal(B.monoidal),
        "fiber_functor": cat.check_functor(B.fiber_functor),
        "covering_functor": cat.check_functor(R),
        "section_monoidal": sf.monoidal,
    }
    if args.emit == "json":
        out.raw(dumps(res))
    elif args.emit == "dot":
        out.raw(cat.to_dot(B.category, "bundle"))
    else:
        for k, v in res.items():
            out.line(f"{k}: {v}")
    return 0


def cmd_factor_set(args, out, limits):
    E = load_extension(args.extension)
    s = _section(E, args.section)
    f, L = ext.factor_set(E, s)
    if args.emit == "json":
        out.raw(dumps(dump_pair(L, f)))
        return 0
    out.line(f"section: {_map(s.s)}")
    out.line("L:")
    for x in range(E.G.order):
        out.line(f"  L({E.G.label(x)}) = {_map(L.maps[x])}")
    out.line("f:")
    for row in f.table:
        out.line("  " + " ".join(str(int(v)) for v in row))
    out.line(f"twisted cocycle: {ext.check_twisted_cocycle(f, L)}")
    return 0


def cmd_check_cocycle(args, out, limits):
    L, f = load_pair(args.pair)
    bad = ext.cocycle_violation(f, L)
    comp = ext.compatibility_violation(f, L)
    if args.emit == "json":
        out.raw(dumps({"cocycle_violation": list(bad) if bad else None, "compatibility_violation": list(comp) if comp else None}))
    else:
        out.line("twisted cocycle: ok" if bad is None else f"twisted cocycle: fails at {bad}")
        out.line("compatibility: ok" if comp is None else f"compatibility: fails at {comp}")
    return 0 if bad is None and comp is None else 1


def cmd_weak_equiv(args, out, limits):
    L, f = load_pair(args.pair)
    L2, f2 = load_pair(args.other, L.G, L.N)
    gamma = ext.weak_equivalent(f, L, f2, L2, limits)
    if args.emit == "json":
        out.raw(dumps({"equivalent": gamma is not None, "gamma": None if gamma is None else gamma.tolist()}))
    elif gamma is None:
        out.line("not weakly equivalent")
    else:
        out.line(f"weakly equivalent via gamma = {_map(gamma)}")
    return 0


def cmd_crossed_product(args, out, limits):
    L, f = load_pair(args.pair)
    E = ext.crossed_product(L.N, L.G, L, f)
    if args.emit == "json":
        data = E.to_json()
        data["middle_group"] = smallgroups.identify(E.E)
        out.raw(dumps(data))
        return 0
    out.line(f"middle group: {smallgroups.identify(E.E)} (order {E.E.order})")
    f2, L2 = ext.factor_set(E, ext.canonical_crossed_section(E))
    out.line(f"round trip: {f2.key() == f.key() and L2.key() == L.key()}")
    return 0


def cmd_classify_ext(args, out, limits):
    G, N = load_group(args.base), load_group(args.fiber)
    classes = ext.classify_extensions(G, N, limits, args.trivial_action)
    if args.emit == "json":
        out.raw(dumps([c.to_json() for c in classes]))
        return 0
    out.line(f"{len(classes)} classes")
    for i, c in enumerate(classes):
        out.line(f"[{i}] {c.middle_group}  L = {_map(c.L.maps)}  f = {_map(c.f.table)}  orbit size {c.class_size}")
    return 0


# --------------------------------------------------------------------------- cohomology


def cmd_cohomology(args, out, limits):
    G = load_group(args.group)
    M = load_coefficients(args.coeff, G)
    methods = ["snf", "brute"] if args.method == "both" else [args.method]
    results = [coh.cohomology_group(args.n, G, M, m, limits) for m in methods]
    if len({tuple(r.invariant_factors) for r in results}) > 1:
        out.line("methods disagree: " + "; ".join(f"{m}: {r}" for m, r in zip(methods, results)))
        return 1
    r = results[0]
    if args.emit == "json":
        out.raw(dumps({"degree": r.degree, "invariant_factors": list(r.invariant_factors), "order": r.order}))
    else:
        out.line(str(r))
    return 0


def cmd_associators(args, out, limits):
    G = load_group(args.group)
    rep = coh.associators(G, args.order, limits)
    if args.emit == "json":
        out.raw(dumps({
            "cochains_checked": rep.cochains_checked,
            "pentagon_valid": [list(c.key()) for c in rep.pentagon_valid],
            "cocycles": [list(c.key()) for c in rep.cocycles],
            "matches_cocycles": rep.matches_cocycles,
            "class_count": rep.class_count,
        }))
    else:
        out.line(f"cochains checked: {rep.cochains_checked}")
        out.line(f"pentagon-valid associators: {len(rep.pentagon_valid)}")
        out.line(f"3-cocycles: {len(rep.cocycles)}")
        out.line(f"sets equal: {rep.matches_cocycles}")
        out.line(f"classes modulo coboundaries: {rep.class_count}")
    return 0 if rep.matches_cocycles else 1


# --------------------------------------------------------------------------- nerves and homology


def cmd_nerve(args, out, limits):
    C, _ = _category(args, limits)
    X = nv.nerve(C, args.k, limits)
    if args.emit == "json":
        out.raw(dumps(X.to_json()))
        return 0
    for n in range(X.k + 1):
        out.line(f"degree {n}: {X.count(n)} simplices, {len(X.nondegenerate(n))} nondegenerate")
    bad = nv.simplicial_identity_violation(X)
    out.line("simplicial identities: ok" if bad is None else f"simplicial identities: {bad}")
    return 0 if bad is None else 1


def _degrees(args, k):
    return [args.n] if args.n is not None else list(range(k))


def cmd_homology(args, out, limits):
    C, _ = _category(args, limits)
    cx = nv.normalized_chains(nv.nerve(C, args.k, limits))
    fn = nv.reduced_homology if args.reduced else nv.homology
    results = [fn(cx, n) for n in _degrees(args, args.k)]
    if args.emit == "json":
        out.raw(dumps([{"degree": h.degree, "free_rank": h.free_rank, "torsion": list(h.torsion)} for h in results]))
    else:
        for h in results:
            out.line(str(h))
    return 0


def cmd_bar(args, out, limits):
    G = load_group(args.group)
    b = nv.bar_spaces(G, args.k, limits)
    cb, ce = nv.normalized_chains(b.BG), nv.normalized_chains(b.EG)
    degs = list(range(args.k))
    BG = [nv.homology(cb, n) for n in degs]
    EG = [nv.reduced_homology(ce, n) for n in degs]
    if args.emit == "json":
        out.raw(dumps({
            "EG_counts": [b.EG.count(n) for n in range(args.k + 1)],
            "BG_counts": [b.BG.count(n) for n in range(args.k + 1)],
            "quotient_ok": b.quotient_ok,
            "BG_homology": [{"free_rank": h.free_rank, "torsion": list(h.torsion)} for h in BG],
            "EG_reduced_homology": [{"free_rank": h.free_rank, "torsion": list(h.torsion)} for h in EG],
        }))
    else:
        out.line(f"EG simplices per degree: {[b.EG.count(n) for n in range(args.k + 1)]}")
        out.line(f"BG simplices per degree: {[b.BG.count(n) for n in range(args.k + 1)]}")
        out.line(f"EG/G = BG: {b.quotient_ok}")
        out.line("BG:")
        for h in BG:
            out.line(f"  {h}")
        out.line("EG (reduced):")
        for h in EG:
            out.line(f"  {h}")
    return 0 if b.quotient_ok else 1


# --------------------------------------------------------------------------- spaces


def cmd_open_cat(args, out, limits):
    X = load_space(args.space)
    C, M = top.open_set_category(X)
    if args.target is not None:
        Y = load_space(args.target)
        F = top.preimage_functor(_ints(args.map), X, Y)
        pairs = [(top.from_bits(Y.opens[v]), top.from_bits(X.opens[int(F.obj_map[v])])) for v in range(len(Y.opens))]
        if args.emit == "json":
            out.raw(dumps({"preimages": pairs, "functor": cat.check_functor(F)}))
        else:
            for v, u in pairs:
                out.line(f"{v} <- {u}")
            out.line(f"functor: {cat.check_functor(F)}")
        return 0
    if args.emit == "dot":
        out.raw(cat.to_dot(C, "opens"))
        return 0
    if args.emit == "json":
        data = _category_json(C, M)
        data["objects"] = [top.from_bits(u) for u in X.opens]
        out.raw(dumps(data))
        return 0
    out.line(f"objects: {C.object_count}")
    out.line(f"morphisms: {C.morphism_count}")
    out.line(f"thin: {cat.is_thin(C)}")
    out.line(f"monoidal: {cat.check_monoidal(M)}")
    return 0


def _cover(X, text, require_union):
    from .io import read_source

    data, _ = read_source(text)
    if data is None:
        raise UsageError(f"cover must be inline JSON or a file: {text}")
    return top.make_cover(X, data, require_union=require_union)


def cmd_refine(args, out, limits):
    X = load_space(args.space)
    V = _cover(X, args.fine, not args.partial)
    U = _cover(X, args.coarse, not args.partial)
    r = top.refinement(V, U, limits)
    if args.emit == "json":
        out.raw(dumps(None if r is None else {
            "phi": list(r.phi),
            "inclusions": [[top.from_bits(a), top.from_bits(b)] for a, b in r.components],
        }))
    elif r is None:
        out.line("no refinement")
    else:
        out.line(f"phi = {list(r.phi)}")
        for a, b in r.components:
            out.line(f"  {top.from_bits(a)} <= {top.from_bits(b)}")
    return 0


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="catkit", description="Categorification of finite groups, extensions and spaces.")
    p.add_argument("--max-candidates", type=int, default=None,
                   help=f"bound on brute-force search spaces (default {DEFAULT_MAX_CANDIDATES}, or ${ENV_VAR})")
    p.add_argument("--workers", type=int, default=1, help="worker threads for enumeration")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, emits=("text", "json"), **kw):
        s = sub.add_parser(name, **kw)
        s.set_defaults(fn=fn)
        s.add_argument("--emit", choices=emits, default="text")
        return s

    s = add("group-info", cmd_group_info)
    s.add_argument("--group", required=True)
    s = add("homs", cmd_homs)
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--brute", action="store_true", help="enumerate all maps instead of generator images")
    s = add("hom-classes", cmd_hom_classes)
    s.add_argument("--source", required=True)
    s.add_argument("--target", required=True)
    s = add("aut", cmd_aut)
    s.add_argument("--group", required=True)
    s = add("categorify", cmd_categorify, ("text", "json", "dot"))
    s.add_argument("--group", required=True)
    s.add_argument("--flavor", choices=cz.FLAVORS, default="simplicial")
    s = add("covering", cmd_covering)
    s.add_argument("--group", required=True)
    for name, fn in (("bundle", cmd_bundle), ("factor-set", cmd_factor_set)):
        s = add(name, fn, ("text", "json", "dot") if name == "bundle" else ("text", "json"))
        s.add_argument("--extension", required=True)
        s.add_argument("--section", help="section images, e.g. '0,3'; default least element per fiber")
    s = add("check-cocycle", cmd_check_cocycle)
    s.add_argument("--pair", required=True)
    s = add("weak-equiv", cmd_weak_equiv)
    s.add_argument("--pair", required=True)
    s.add_argument("--other", required=True)
    s = add("crossed-product", cmd_crossed_product)
    s.add_argument("--pair", required=True)
    s = add("classify-ext", cmd_classify_ext)
    s.add_argument("--base", required=True, help="quotient group G")
    s.add_argument("--fiber", required=True, help="kernel N")
    s.add_argument("--trivial-action", action="store_true")
    s = add("cohomology", cmd_cohomology)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--coeff", required=True)
    s.add_argument("--method", choices=("snf", "brute", "both"), default="snf")
    s = add("associators", cmd_associators)
    s.add_argument("--group", required=True)
    s.add_argument("--order", type=int, default=2, help="order of the scalar group")
    for name, fn in (("nerve", cmd_nerve), ("homology", cmd_homology)):
        s = add(name, fn)
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--group")
        src.add_argument("--space")
        s.add_argument("--flavor", choices=cz.FLAVORS, default="tautological")
        s.add_argument("--k", type=int, default=3)
        if name == "homology":
            s.add_argument("--n", type=int, default=None)
            s.add_argument("--reduced", action="store_true")
    s = add("bar", cmd_bar)
    s.add_argument("--group", required=True)
    s.add_argument("--k", type=int, default=3)
    s = add("open-cat", cmd_open_cat, ("text", "json", "dot"))
    s.add_argument("--space", required=True)
    s.add_argument("--target", help="second space; with --map prints the preimage functor")
    s.add_argument("--map", help="point images of a map from --space to --target")
    s = add("refine", cmd_refine)
    s.add_argument("--space", required=True)
    s.add_argument("--fine", required=True, help="refining family of opens as JSON point lists")
    s.add_argument("--coarse", required=True)
    s.add_argument("--partial", action="store_true", help="allow families that do not cover the space")
    return p


def run(argv: Optional[list] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "fn", None):
            raise UsageError("missing subcommand")
        base = Limits.from_env(args.workers)
        limits = base if args.max_candidates is None else Limits(args.max_candidates, args.workers)
        return args.fn(args, Output(stdout), limits)
    except SizeLimit as e:
        stderr.write(f"size limit: {e}\n")
        return 2
    except CatkitError as e:
        stderr.write(f"error: {type(e).__name__}: {e}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

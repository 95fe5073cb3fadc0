"""Command line front end.

Sequences given with --seq / --sigma list mutations in the order they are
applied (first applied first); they are reversed into the written order the
library uses.  Reports are JSON with sorted keys.  Exit status is 0 on
success, 1 when a verification fails and 2 on bad input.

Set QCLUSTER_CHECK=1 to re-verify pointedness and bar-invariance of every
emitted cluster variable.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import re
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import injchain, qchar, seeds, triangulate, tropical, words
from .qtorus import NonzeroRemainder, TorusElement, TorusError, normalize


class InputError(Exception):
    pass


class VerificationFailed(Exception):
    pass


# parsing helpers

def ints(text: str | None, what: str = "vector") -> list[int]:
    if text is None or not text.strip():
        return []
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise InputError(f"{what}: expected comma separated integers, got {text!r}") from exc


def matrix(text: str | None, what: str = "matrix") -> list[list[int]]:
    if text is None or not text.strip():
        return []
    return [ints(row, what) for row in text.split(";")]


def mapping(text: str | None, what: str) -> dict[int, int]:
    out = {}
    if not text:
        return out
    for part in text.split(","):
        try:
            a, b = part.split(":")
            out[int(a)] = int(b)
        except ValueError as exc:
            raise InputError(f"{what}: expected pairs a:b, got {part!r}") from exc
    return out


def arrows(text: str | None) -> list[tuple[int, int]]:
    out = []
    if not text:
        return out
    for part in text.split(","):
        try:
            a, b = part.split(">")
            out.append((int(a), int(b)))
        except ValueError as exc:
            raise InputError(f"orientation: expected arrows like 2>1, got {part!r}") from exc
    return out


def written(applied: Sequence[int]) -> list[int]:
    return list(reversed(list(applied)))


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def load_seed(path: str) -> seeds.Seed:
    data = load_json(path)
    if isinstance(data, dict) and "seed" in data and isinstance(data["seed"], dict):
        data = data["seed"]
    try:
        return seeds.Seed.from_json(data)
    except KeyError as exc:
        raise InputError(f"{path}: missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError, seeds.SeedError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_element(path: str, seed: seeds.Seed) -> TorusElement:
    data = load_json(path)
    try:
        return TorusElement.from_json(seed.torus, data)
    except KeyError as exc:
        raise InputError(f"{path}: missing field {exc.args[0]!r}") from exc
    except TorusError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_word(path: str) -> tuple[words.Word, dict]:
    data = load_json(path)
    try:
        return words.Word(data["word"], data["cartan"]), data
    except KeyError as exc:
        raise InputError(f"{path}: missing field {exc.args[0]!r}") from exc
    except words.WordError as exc:
        raise InputError(f"{path}: {exc}") from exc


def check_level() -> int:
    try:
        return int(os.environ.get("QCLUSTER_CHECK", "0"))
    except ValueError:
        return 0


def self_check(elements: Sequence[TorusElement]) -> None:
    if check_level() < 1:
        return
    for i, x in enumerate(elements, start=1):
        if not x.is_pointed():
            raise VerificationFailed(f"variable {i} is not pointed")
        if not x.is_bar_invariant():
            raise VerificationFailed(f"variable {i} is not bar-invariant")


def reach_data(seed: seeds.Seed, args) -> injchain.ReachData:
    perm = ints(args.perm, "--perm") or list(range(1, seed.n + 1))
    try:
        return injchain.checkInjectiveReachable(seed, written(ints(args.sigma, "--sigma")), perm)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


# commands

def cmd_seed_check(args) -> Any:
    seed = load_seed(args.seed)
    try:
        d = seeds.checkCompatible(seed.lam, seed.btilde)
    except seeds.SeedError as exc:
        raise VerificationFailed(f"not a compatible pair: {exc}") from exc
    return {"id": seed.id, "m": seed.m, "n": seed.n, "D": list(d)}


def cmd_mutate(args) -> Any:
    seed = load_seed(args.seed)
    seq = written(ints(args.seq, "--seq"))
    if not args.expand:
        return seeds.mutateSeedSeq(seed, seq).to_json() if seq else seed.to_json()
    st = seeds.applySequence(seeds.ClusterState.initial(seed), seq)
    self_check(st.vars)
    return st.to_json()


def cmd_run(args) -> Any:
    seed = load_seed(args.seed)
    try:
        d0 = seeds.checkCompatible(seed.lam, seed.btilde)
    except seeds.SeedError as exc:
        raise VerificationFailed(f"not a compatible pair: {exc}") from exc
    st = seeds.ClusterState.initial(seed)
    steps = []
    failures = []
    for k in ints(args.seq, "--seq"):
        st = seeds.mutateState(st, k)
        row = {"vertex": k}
        row["pointed"] = all(x.is_pointed() for x in st.vars)
        row["bar_invariant"] = all(x.is_bar_invariant() for x in st.vars)
        row["quasi_commuting"] = seeds.quasiCommutationHolds(st)
        try:
            row["same_D"] = seeds.checkCompatible(st.seed.lam, st.seed.btilde) == d0
        except seeds.SeedError:
            row["same_D"] = False
        if not all(v for key, v in row.items() if key != "vertex"):
            failures.append(k)
        steps.append(row)
    report = {"steps": steps, "ok": not failures}
    if failures:
        print(json.dumps(report, sort_keys=True, indent=2))
        raise VerificationFailed(f"checks failed after mutating at {failures}")
    return report


def cmd_expand_var(args) -> Any:
    seed = load_seed(args.seed)
    st = seeds.applySequence(seeds.ClusterState.initial(seed), written(ints(args.seq, "--seq")))
    if not 1 <= args.var <= seed.m:
        raise InputError(f"--var must lie in 1..{seed.m}")
    x = st.var(args.var)
    self_check([x])
    return x.to_json()


def cmd_gvector(args) -> Any:
    seed = load_seed(args.seed)
    st = seeds.applySequence(seeds.ClusterState.initial(seed), written(ints(args.seq, "--seq")))
    return {"seed": seed.id, "gvectors": [list(seeds.extendedGVector(st, i)) for i in range(1, seed.m + 1)]}


def cmd_tropical(args) -> Any:
    seed = load_seed(args.seed)
    g = ints(args.deg, "--deg")
    try:
        out = tropical.tropicalPath(tropical.TropicalPath(seed, written(ints(args.seq, "--seq"))), g)
    except (tropical.WrongSeed, seeds.SeedError) as exc:
        raise InputError(str(exc)) from exc
    return ",".join(str(x) for x in out)


def cmd_injreach(args) -> Any:
    seed = load_seed(args.seed)
    try:
        rd = reach_data(seed, args)
    except injchain.NotInjectiveReachable as exc:
        raise VerificationFailed(str(exc)) from exc
    out = rd.to_json()
    if args.expand:
        inj, proj = injchain.injectivesAndProjectives(seed, rd)
        out["injectives"] = [x.to_json() for x in inj]
        out["projectives"] = [x.to_json() for x in proj]
    return out


def cmd_inj_elem(args) -> Any:
    seed = load_seed(args.seed)
    try:
        rd = reach_data(seed, args)
    except injchain.NotInjectiveReachable as exc:
        raise VerificationFailed(str(exc)) from exc
    g = ints(args.deg, "--deg")
    if len(g) != seed.m:
        raise InputError(f"--deg needs {seed.m} entries")
    return injchain.injPointedElement(seed, rd, g).to_json()


def cmd_chain(args) -> Any:
    seed = load_seed(args.seed)
    try:
        rd = reach_data(seed, args)
    except injchain.NotInjectiveReachable as exc:
        raise VerificationFailed(str(exc)) from exc
    st, rd_d = injchain.buildChainSeed(seed, rd, args.d)
    out = st.to_json()
    out["reach"] = rd_d.to_json()
    return out


def _window(radius: int, m: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(-radius, radius + 1), repeat=m))


def cmd_expand_basis(args) -> Any:
    seed = load_seed(args.seed)
    z = load_element(args.element, seed)
    data = load_json(args.basis)
    try:
        basis = triangulate.PointedSet.from_json(seed.torus, data)
    except KeyError as exc:
        raise InputError(f"{args.basis}: missing field {exc.args[0]!r}") from exc
    window = _window(args.window, seed.m) if args.window is not None else None
    ex = triangulate.unitriangularExpand(z, basis, window)
    return ex.to_json()


def cmd_verify_triangular(args) -> Any:
    seed = load_seed(args.seed)
    try:
        rd = reach_data(seed, args)
    except injchain.NotInjectiveReachable as exc:
        raise VerificationFailed(str(exc)) from exc
    st = seeds.ClusterState.initial(seed)
    radius = args.window
    win = [g for g in _window(radius, seed.m)]
    if args.pointed:
        cand = triangulate.PointedSet.from_json(seed.torus, load_json(args.pointed))
        cand.window = set(win) & set(cand.elements)
    else:
        states = seeds.exchangePattern(seed)
        cand = triangulate.PointedSet(seed.torus, window=win,
                                      factory=triangulate.clusterMonomialFactory(states))
    inj = injchain.injectives(seed, rd)
    monos = {}
    for a in itertools.product(range(radius + 1), repeat=seed.n):
        x = seeds.clusterMonomial(st, list(a) + [0] * (seed.m - seed.n))
        monos[x.leading_degree()] = x
        y = seed.torus.one()
        for k, c in enumerate(a):
            y = y * (inj[k] ** c)
        y = normalize(y)
        monos[y.leading_degree()] = y
    rep = triangulate.verifyTriangularAxioms(cand, st.vars, monos, seed.n)
    out = {"axioms": rep.summary(), "failures": rep.results, "window": radius}
    if not rep.ok:
        print(json.dumps(out, sort_keys=True, indent=2))
        raise VerificationFailed("triangular basis axioms fail on the window")
    return out


def _similarity(args, source: seeds.Seed) -> triangulate.SimilarityMap:
    var_star = mapping(args.var_star, "--var-star") or {i: i for i in range(1, source.n + 1)}
    frozen = mapping(args.frozen, "--frozen")
    return triangulate.SimilarityMap(var_star, Fraction(args.delta), frozen)


def cmd_variation(args) -> Any:
    source, target = load_seed(args.source), load_seed(args.target)
    x = load_element(args.element, source)
    sim = _similarity(args, source)
    try:
        d1 = seeds.checkCompatible(source.lam, source.btilde)
        d2 = seeds.checkCompatible(target.lam, target.btilde)
        triangulate.checkSimilar(source.torus, target.torus, sim, d1, d2)
    except (seeds.SeedError, triangulate.TriangulateError) as exc:
        raise VerificationFailed(f"seeds are not similar: {exc}") from exc
    return triangulate.applyVariation(x, sim, target.torus).to_json()


def cmd_correction(args) -> Any:
    target = load_seed(args.target)
    try:
        fm, fj = triangulate.correctionFactors(
            target.torus, ints(args.deg_m, "--deg-m"), matrix(args.deg_mi, "--deg-mi"),
            ints(args.deg_z, "--deg-z") or None, matrix(args.deg_zj, "--deg-zj"), matrix(args.uj, "--uj"))
    except triangulate.NonFrozenSupport as exc:
        raise VerificationFailed(str(exc)) from exc
    return {"fM": fm.to_json(), "fj": [f.to_json() for f in fj]}


def _adaptable(w: words.Word, data: dict) -> words.Adaptable:
    orient = data.get("orientation")
    return words.adaptableData(w, [tuple(a) for a in orient] if orient else None, int(data.get("anchor", 0)))


def cmd_word(args) -> Any:
    w, data = load_word(args.word)
    if args.action == "build":
        try:
            ad = _adaptable(w, data)
            lam = words.lambdaFromNForm(w, ad)
            source = "N-form"
        except words.NotAdaptable:
            lam, source = None, "solved"
        ws = words.buildGammaSeed(w, lam)
        out = ws.seed.to_json()
        out.update({
            "order": ws.order,
            "frozen": w.frozen,
            "arrows": [[s, t, c] for (s, t), c in sorted(words.gammaArrows(w).items())],
            "lambda_source": source,
        })
        return out
    if args.action == "sigma":
        seq, sigma = words.glsData(w)
        return {"Sigma_written": seq, "Sigma_applied": written(seq),
                "sigma": [sigma[k] for k in sorted(sigma)],
                "blocks": {str(k): words.kSequence(w, k) for k in range(1, w.l + 1)}}
    if args.action == "alt":
        seq, back = words.altSequence(w)
        return {"Sigma_up_written": seq, "sigma_Sigma_inverse_written": back}
    if args.action == "embed":
        try:
            ad = _adaptable(w, data)
        except words.NotAdaptable as exc:
            raise VerificationFailed(str(exc)) from exc
        xs, ys = words.thetaMaps(w, ad)
        out = ad.to_json()
        out["theta_X"] = {str(k): [[i, a, x] for (i, a), x in sorted(v.items())] for k, v in xs.items()}
        out["theta_Y"] = {str(k): [[i, a, x] for (i, a), x in sorted(v.items())] for k, v in ys.items()}
        out["Lambda"] = [list(r) for r in words.lambdaFromNForm(w, ad, internal=False)]
        return out
    raise InputError(f"unknown word action {args.action}")


def _grading(args) -> qchar.AcyclicGrading:
    cartan = matrix(args.cartan, "--cartan")
    if not cartan:
        raise InputError("--cartan is required")
    xi = ints(args.xi, "--xi") or None
    try:
        return qchar.AcyclicGrading(cartan, arrows(args.orientation), xi)
    except qchar.QCharError as exc:
        raise InputError(str(exc)) from exc


def cmd_char(args) -> Any:
    gr = _grading(args)
    try:
        if args.action == "kr":
            return qchar.krCharacter(args.i, args.k, args.a, gr, args.window, args.mode).to_json()
        if args.action == "variant":
            if args.h is None:
                raise InputError("--h is required")
            return qchar.variantCharacter(args.i, args.k, args.h, args.a, gr, args.window, args.mode).to_json()
        rep = qchar.checkTSystems(args.i, args.k, args.a, gr, args.window, args.mode)
    except qchar.WindowTooSmall as exc:
        raise InputError(str(exc)) from exc
    out = {"checks": rep.checks, "details": rep.details}
    if not rep.ok:
        print(json.dumps(out, sort_keys=True, indent=2))
        raise VerificationFailed("character identities fail")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcluster", description="Quantum cluster algebra computations.")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def seq_cmd(name, func, help_text, seq=True):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("seed")
        if seq:
            sp.add_argument("--seq", default="", help="vertices in the order applied, e.g. 1,2")
        sp.set_defaults(func=func)
        return sp

    seed = sub.add_parser("seed", help="seed utilities")
    seed_sub = seed.add_subparsers(dest="action", required=True)
    chk = seed_sub.add_parser("check", help="verify the compatible pair and print D")
    chk.add_argument("seed")
    chk.set_defaults(func=cmd_seed_check)

    seq_cmd("mutate", cmd_mutate, "mutate a seed").add_argument(
        "--expand", action="store_true", help="also expand the cluster variables")
    seq_cmd("run", cmd_run, "mutate step by step and verify the Laurent phenomenon checks")
    seq_cmd("expand-var", cmd_expand_var, "expand one cluster variable").add_argument(
        "--var", type=int, required=True)
    seq_cmd("gvector", cmd_gvector, "extended g-vectors of a mutated cluster")
    seq_cmd("tropical", cmd_tropical, "transport a degree along a path").add_argument(
        "--deg", required=True)

    def reach_cmd(name, func, help_text):
        sp = seq_cmd(name, func, help_text, seq=False)
        sp.add_argument("--sigma", default="", help="the sequence Sigma, in the order applied")
        sp.add_argument("--perm", default="", help="sigma(1),...,sigma(n)")
        return sp

    reach_cmd("injreach", cmd_injreach, "verify injective reachability").add_argument(
        "--expand", action="store_true", help="also print injectives and projectives")
    reach_cmd("inj-elem", cmd_inj_elem, "the injective pointed element of a degree").add_argument(
        "--deg", required=True)
    reach_cmd("chain", cmd_chain, "the seed t[d] expanded in the initial torus").add_argument(
        "--d", type=int, required=True)
    vt = reach_cmd("verify-triangular", cmd_verify_triangular, "check triangular basis axioms on a window")
    vt.add_argument("--window", type=int, default=2, help="radius of the degree window")
    vt.add_argument("--pointed", help="pointed set file; defaults to cluster monomials")

    eb = sub.add_parser("expand-basis", help="unitriangular expansion into a pointed set")
    eb.add_argument("seed")
    eb.add_argument("--element", required=True)
    eb.add_argument("--basis", required=True)
    eb.add_argument("--window", type=int, help="radius of the degree window")
    eb.set_defaults(func=cmd_expand_basis)

    var = sub.add_parser("variation", help="transport a pointed element between similar seeds")
    var.add_argument("element")
    var.add_argument("--source", required=True)
    var.add_argument("--target", required=True)
    var.add_argument("--var-star", default="", help="target:source pairs on exchangeable vertices")
    var.add_argument("--frozen", default="", help="source:target pairs on frozen vertices")
    var.add_argument("--delta", default="1")
    var.set_defaults(func=cmd_variation)

    cor = sub.add_parser("correction", help="frozen correction factors")
    cor.add_argument("--target", required=True)
    cor.add_argument("--deg-m", required=True)
    cor.add_argument("--deg-mi", default="", help="degrees separated by ';'")
    cor.add_argument("--deg-z", default="")
    cor.add_argument("--deg-zj", default="")
    cor.add_argument("--uj", default="")
    cor.set_defaults(func=cmd_correction)

    wd = sub.add_parser("word", help="word combinatorics")
    wd.add_argument("action", choices=["build", "sigma", "alt", "embed"])
    wd.add_argument("word")
    wd.set_defaults(func=cmd_word)

    ch = sub.add_parser("char", help="truncated q,t-characters")
    ch.add_argument("action", choices=["kr", "variant", "tsystem"])
    ch.add_argument("--cartan", required=True, help="rows separated by ';'")
    ch.add_argument("--orientation", default="", help="arrows like 2>1,2>3")
    ch.add_argument("--xi", default="")
    ch.add_argument("--i", type=int, required=True)
    ch.add_argument("--k", type=int, required=True)
    ch.add_argument("--h", type=int)
    ch.add_argument("--a", type=int, default=0)
    ch.add_argument("--window", type=int)
    ch.add_argument("--mode", choices=["E", "N"], default="E")
    ch.set_defaults(func=cmd_char)
    return p


def emit(result: Any, out: str | None) -> None:
    text = result if isinstance(result, str) else json.dumps(result, sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--deg -1,0`` into ``--deg=-1,0`` so argparse keeps the value."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and re.fullmatch(r"-\d[\d,;\-]*", tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        emit(args.func(args), args.out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (VerificationFailed, NonzeroRemainder) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (seeds.SeedError, TorusError, words.WordError, qchar.QCharError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

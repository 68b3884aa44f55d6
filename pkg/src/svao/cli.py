"""Command line interface: JSON algebra documents in, check reports out."""
import argparse
import json
import os
import sys
from fractions import Fraction

from .cohomology import (
    VAModule, adjoint_module, build_extension, check_module_axioms, h0, h1, is_derivation, translation_hom,
    verify_extension,
)
from .conformal import LCAStructure, check_lca_axioms, mc_report
from .hmodule import H_ONE, FiniteHModule, FreeHModule, ModPoly, h_mul
from .report import FAIL, NOT_EVALUABLE, PASS, Check
from .superpoly import K, W, SuperContext, make_mono
from .vertex import FiniteVA, check_integral_forms, check_va_axioms, mc_certificate

SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "schema.json")


class InputError(Exception):
    pass


# nabla-polynomial strings: "2 T^2 S1 - 1/2 S1 S2 + 3"


class NablaParser:
    def __init__(self, text, flavor, N):
        self.text = text
        self.pos = 0
        self.flavor = flavor
        self.N = N

    def error(self, msg):
        raise InputError("nabla polynomial %r: %s at column %d" % (self.text, msg, self.pos + 1))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " *":
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def number(self):
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "/"):
            self.pos += 1
        try:
            return Fraction(self.text[start:self.pos])
        except (ValueError, ZeroDivisionError):
            self.error("bad coefficient")

    def integer(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self):
        out = {}
        sgn = 1
        if self.peek() in "+-":
            sgn = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        while True:
            c, h = self.term()
            if c:
                out[h] = out.get(h, 0) + sgn * c
            nxt = self.peek()
            if not nxt:
                break
            if nxt not in "+-":
                self.error("expected + or -")
            sgn = -1 if nxt == "-" else 1
            self.pos += 1
        return {h: c for h, c in out.items() if c}

    def term(self):
        coef = Fraction(1)
        h = H_ONE
        seen = False
        if self.peek().isdigit():
            coef = self.number()
            seen = True
        while self.peek() in ("T", "S"):
            ch = self.text[self.pos]
            self.pos += 1
            if ch == "T":
                k = 1
                if self.peek() == "^":
                    self.pos += 1
                    self.skip()
                    k = self.integer()
                f = (k, ())
            else:
                i = self.integer()
                if not 1 <= i <= self.N:
                    self.error("S index out of range")
                f = (0, (i,))
            s, h = h_mul(self.flavor, h, f)
            coef *= s
            seen = True
            if s == 0:
                h = H_ONE
        if not seen:
            self.error("empty term")
        return coef, h


def parse_nabla(text, flavor, N):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return {H_ONE: Fraction(text)}
    return NablaParser(str(text), flavor, N).parse()


# documents


def load_schema():
    with open(SCHEMA_PATH) as fh:
        return json.load(fh)


def validate(doc):
    import jsonschema
    try:
        jsonschema.validate(doc, load_schema())
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise InputError("schema violation at %s: %s" % (where, e.message))


def read_document(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e.strerror))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InputError("%s: not valid JSON (%s)" % (path, e))
    validate(doc)
    return doc


class Names:
    def __init__(self, entries, what):
        self.names = [e["name"] for e in entries]
        self.parities = [e["parity"] for e in entries]
        self.what = what
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate %s name" % what)

    def index(self, name, where):
        if name not in self.names:
            raise InputError("%s: unknown %s %r" % (where, self.what, name))
        return self.names.index(name)


def lam_value(module, entries, names, where, keyfn):
    """sum over entries of lambda^m theta^I times coefficient nabla-polynomials applied to basis elements."""
    ctx = SuperContext(module.flavor, module.N, 1)
    out = ModPoly(module, 1)
    for j, e in enumerate(entries):
        I = e.get("I", [])
        if any(not 1 <= i <= module.N for i in I) or len(set(I)) != len(I):
            raise InputError("%s.value[%d]: index set %s is not a subset of [N]" % (where, j, I))
        s = _sort_sign(I)
        mono = make_mono(ctx, [(e.get("m", 0), I)])
        for name, poly in sorted(e["coeffs"].items()):
            k = keyfn(names.index(name, where))
            for h, c in parse_nabla(poly, module.flavor, module.N).items():
                for k2, c2 in module.act(h, k).items():
                    out = out + ModPoly(module, 1, {(mono, k2): s * c * c2})
    return out


def _sort_sign(I):
    s = 1
    I = list(I)
    for a in range(len(I)):
        for b in range(a + 1, len(I)):
            if I[a] > I[b]:
                s = -s
    return s


def _coeff(x, where):
    try:
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError):
        raise InputError("%s: bad coefficient %r" % (where, x))


def finite_module(flavor, N, block, where):
    names = Names(block["basis"], "basis vector")

    def mapping(m, label):
        out = {}
        for col, img in m.items():
            j = names.index(col, "%s.%s" % (where, label))
            out[j] = {names.index(r, "%s.%s" % (where, label)): _coeff(c, "%s.%s" % (where, label)) for r, c in img.items()}
        return out
    T = mapping(block.get("T", {}), "T")
    S = {}
    for i, m in block.get("S", {}).items():
        if not i.isdigit() or not 1 <= int(i) <= N:
            raise InputError("%s.S: index %s out of range" % (where, i))
        S[int(i)] = mapping(m, "S")
    return FiniteHModule(flavor, N, names.names, names.parities, T, S), names


def build_structure(doc, flavor_override=None):
    flavor = flavor_override or doc["flavor"]
    N = doc["N"]
    label = doc.get("label")
    if "finite_dim" in doc:
        block = doc["finite_dim"]
        mod, names = finite_module(flavor, N, block, "finite_dim")
        br = {}
        for j, e in enumerate(block.get("bracket", [])):
            where = "finite_dim.bracket[%d]" % j
            a, b = names.index(e["a"], where), names.index(e["b"], where)
            br[(a, b)] = lam_value(mod, e["value"], names, where, lambda k: k)
        mu = {}
        for j, e in enumerate(block.get("mu", [])):
            where = "finite_dim.mu[%d]" % j
            a, b = names.index(e["a"], where), names.index(e["b"], where)
            mu[(a, b)] = {names.index(c, where): _coeff(x, where) for c, x in e["value"].items()}
        return FiniteVA(mod, br, mu, label)
    names = Names(doc.get("generators", []), "generator")
    central = doc.get("central", [])
    for c in central:
        names.index(c, "central")
    mod = FreeHModule(flavor, N, list(zip(names.names, names.parities)), central)
    table = {}
    for j, e in enumerate(doc.get("bracket", [])):
        where = "bracket[%d]" % j
        a, b = names.index(e["a"], where), names.index(e["b"], where)
        table[((H_ONE, a), (H_ONE, b))] = lam_value(mod, e["value"], names, where, lambda k: (H_ONE, k))
    return LCAStructure(mod, table, label)


def build_module(doc, V):
    block = doc.get("module") or {"adjoint": True}
    if block.get("adjoint"):
        return adjoint_module(V)
    if isinstance(V, LCAStructure):
        names = Names(block.get("generators", []), "module generator")
        M = FreeHModule(V.flavor, V.N, list(zip(names.names, names.parities)), block.get("central", []))
        keyfn = lambda k: (H_ONE, k)
        vnames = Names([{"name": n, "parity": p} for n, p in V.module.generators], "generator")
        vkey = lambda k: (H_ONE, k)
    else:
        M, names = finite_module(V.flavor, V.N, block, "module")
        keyfn = lambda k: k
        vnames = Names([{"name": n, "parity": p} for n, p in zip(V.module.names, V.module.parities)], "basis vector")
        vkey = lambda k: k
    action = {}
    for j, e in enumerate(block.get("action", [])):
        where = "module.action[%d]" % j
        action[(vkey(vnames.index(e["a"], where)), keyfn(names.index(e["x"], where)))] = lam_value(M, e["value"], names, where, keyfn)
    dot = {}
    for j, e in enumerate(block.get("dot", [])):
        where = "module.dot[%d]" % j
        if isinstance(V, LCAStructure):
            raise InputError("%s: dot actions need a finite carrier" % where)
        dot[(vnames.index(e["a"], where), names.index(e["x"], where))] = {names.index(c, where): _coeff(x, where) for c, x in e["value"].items()}
    return VAModule(V, M, action, dot, block.get("label"))


def read_cocycle(path, Wm):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e.strerror))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InputError("%s: not valid JSON (%s)" % (path, e))
    if not isinstance(doc, dict):
        raise InputError("cocycle file must hold an object")
    V, M = Wm.base, Wm.module
    if Wm.level == "va":
        vnames = Names([{"name": n, "parity": p} for n, p in zip(V.module.names, V.module.parities)], "basis vector")
        mnames = Names([{"name": n, "parity": p} for n, p in zip(M.names, M.parities)], "module basis vector")
        vkey = mkey = lambda k: k
    else:
        vnames = Names([{"name": n, "parity": p} for n, p in V.module.generators], "generator")
        mnames = Names([{"name": n, "parity": p} for n, p in M.generators], "module generator")
        vkey = mkey = lambda k: (H_ONE, k)
    beta, em = {}, {}
    for j, e in enumerate(doc.get("beta", [])):
        where = "beta[%d]" % j
        beta[(vkey(vnames.index(e["a"], where)), vkey(vnames.index(e["b"], where)))] = lam_value(M, e["value"], mnames, where, mkey)
    for j, e in enumerate(doc.get("em", [])):
        where = "em[%d]" % j
        if Wm.level != "va":
            raise InputError("%s: products need a finite carrier" % where)
        em[(vnames.index(e["a"], where), vnames.index(e["b"], where))] = {mnames.index(c, where): _coeff(x, where) for c, x in e["value"].items()}
    return beta, em


def dump_finite(V):
    """A FiniteVA as a document, the inverse of build_structure."""
    mod = V.module
    names = mod.names

    def mapping(m):
        return {names[j]: {names[i]: str(c) for i, c in sorted(col.items())} for j, col in sorted(m.items())}

    def lam_entries(P):
        out = {}
        for (mono, k), c in P.sorted_terms():
            m = mono[0][0]
            I = [i for _, i in mono[1]]
            out.setdefault((m, tuple(I)), {})[names[k]] = str(c)
        return [{"m": m, "I": list(I), "coeffs": cs} for (m, I), cs in out.items()]
    block = {"basis": [{"name": n, "parity": p} for n, p in zip(names, mod.parities)]}
    if mod.T:
        block["T"] = mapping(mod.T)
    S = {str(i): mapping(m) for i, m in mod.S.items() if m}
    if S:
        block["S"] = S
    if V.lca.table:
        block["bracket"] = [{"a": names[a], "b": names[b], "value": lam_entries(v)} for (a, b), v in sorted(V.lca.table.items())]
    if V.mu:
        block["mu"] = [{"a": names[a], "b": names[b], "value": {names[c]: str(x) for c, x in sorted(v.items())}}
                       for (a, b), v in sorted(V.mu.items())]
    doc = {"flavor": V.flavor, "N": V.N}
    if V.label:
        doc["label"] = V.label
    doc["finite_dim"] = block
    return doc


# commands


def jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def level_of(S):
    return "va" if isinstance(S, FiniteVA) else "lca"


def cmd_check(S, args, doc):
    if args.axioms == "lca":
        L = S.lca if isinstance(S, FiniteVA) else S
        return check_lca_axioms(L), {}
    if args.axioms == "va":
        if not isinstance(S, FiniteVA):
            return [Check("va axioms", NOT_EVALUABLE, note="no multiplication on a free carrier")], {}
        return check_va_axioms(S), {}
    if args.axioms == "integral-forms":
        if not isinstance(S, FiniteVA):
            return [Check("integral forms", NOT_EVALUABLE, note="no multiplication on a free carrier")], {}
        return check_integral_forms(S), {}
    Wm = build_module(doc, S)
    level = "lca" if Wm.level == "lca" else "va"
    return check_module_axioms(Wm, level), {"module": Wm.label}


def cmd_mc(S, args, doc):
    if args.level == "lca":
        L = S.lca if isinstance(S, FiniteVA) else S
        return mc_report(L), {}
    if not isinstance(S, FiniteVA):
        return [Check("mc certificate", NOT_EVALUABLE, note="no multiplication on a free carrier")], {}
    return mc_certificate(S, args.pole_order), {"pole_order": args.pole_order}


def _vec_render(Wm, vec):
    return ModPoly.element(Wm.module, vec).render()


def cmd_cohomology(S, args, doc):
    Wm = build_module(doc, S)
    d = args.degree_bound
    if args.h == 0:
        r = h0(Wm)
        checks = [Check("h0 two-way agreement", PASS if r["agree"] else FAIL)]
        result = {"dim": r["dim"], "casimir_dim": r["casimir_dim"], "classes": r["classes"],
                  "basis": [_vec_render(Wm, v) for v in r["kernel_basis"]]}
        return checks, result
    r = h1(Wm, d)
    checks = [Check("inner derivations are derivations", PASS if all(p["ind_in_der"] for p in r["parts"].values()) else FAIL)]
    if doc.get("module") is None or doc["module"].get("adjoint"):
        checks.append(Check("T is a derivation", PASS if is_derivation(translation_hom(Wm)) else FAIL))
    parts = {("even" if p == 0 else "odd"): v for p, v in sorted(r["parts"].items())}
    result = {"dim": r["dim"], "parts": parts}
    if r["truncated_at"] is not None:
        result["truncated_at_degree"] = r["truncated_at"]
    return checks, result


def cmd_extend(S, args, doc):
    Wm = build_module(doc, S)
    Y = read_cocycle(args.cocycle, Wm)
    E, rep = build_extension(Wm, Y)
    checks = [Check("cocycle: " + c.name, c.status, c.witness, c.defect, c.note) for c in rep]
    if args.verify:
        checks += [Check("extension: " + c.name, c.status, c.witness, c.defect, c.note) for c in verify_extension(E)]
    result = {}
    if isinstance(E, FiniteVA):
        result["extension"] = dump_finite(E)["finite_dim"]
    return checks, result


def cmd_bracket(S, args, doc):
    a, b = args.eval
    if isinstance(S, FiniteVA):
        names = S.module.names
        keys = []
        for n in (a, b):
            if n not in names:
                raise InputError("bracket --eval: unknown basis vector %r" % n)
            keys.append(names.index(n))
        result = {"bracket": S.bracket(*keys).render(),
                  "product": ModPoly.element(S.module, S.pk(*keys)).render(),
                  "integral": S.F(*keys).render()}
        return [], result
    names = S.module.names
    keys = []
    for n in (a, b):
        if n not in names:
            raise InputError("bracket --eval: unknown generator %r" % n)
        keys.append(S.module.gen(n))
    return [], {"bracket": S.bracket(*keys).render()}


COMMANDS = {"check": cmd_check, "mc": cmd_mc, "cohomology": cmd_cohomology, "extend": cmd_extend, "bracket": cmd_bracket}


def make_parser():
    p = argparse.ArgumentParser(prog="svao", description="Check SUSY Lie conformal and vertex algebra structures.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", required=True, help="JSON algebra document")
        sp.add_argument("--output", choices=["text", "json"], default="text")
        sp.add_argument("--degree-bound", type=int, default=2)
        sp.add_argument("--flavor-override", choices=[W, K])
    sp = sub.add_parser("check", help="run an axiom family")
    sp.add_argument("--axioms", choices=["lca", "va", "integral-forms", "module"], required=True)
    common(sp)
    sp = sub.add_parser("mc", help="Maurer-Cartan check")
    sp.add_argument("--level", choices=["lca", "va"], required=True)
    sp.add_argument("--pole-order", type=int, default=2)
    common(sp)
    sp = sub.add_parser("cohomology", help="H^0 or H^1 with coefficients in the module")
    sp.add_argument("--h", type=int, choices=[0, 1], required=True)
    common(sp)
    sp = sub.add_parser("extend", help="extension by a two-cochain")
    sp.add_argument("--cocycle", required=True)
    sp.add_argument("--verify", action="store_true")
    common(sp)
    sp = sub.add_parser("bracket", help="evaluate the Lambda-bracket of two basis elements")
    sp.add_argument("--eval", nargs=2, metavar=("A", "B"), required=True)
    common(sp)
    return p


def run(args):
    """(report dict, exit code); raises InputError on bad input."""
    doc = read_document(args.input)
    S = build_structure(doc, args.flavor_override)
    checks, result = COMMANDS[args.command](S, args, doc)
    options = {k: v for k, v in sorted(vars(args).items()) if k not in ("input", "output", "command")}
    report = {
        "command": args.command,
        "input": os.path.basename(args.input),
        "options": jsonable(options),
        "structure": {"label": S.label, "flavor": S.flavor, "N": S.N, "level": level_of(S)},
        "checks": [jsonable(c.as_dict()) for c in checks],
        "result": jsonable(result),
        "environment": {"seed": int(os.environ.get("SVAO_SEED", "0")), "degree_bound": args.degree_bound},
    }
    code = 0 if all(c.status == PASS for c in checks) else 1
    return report, code


def render_text(report):
    st = report["structure"]
    lines = ["%s: %s (flavor %s, N=%d, %s level)" % (report["command"], st["label"] or report["input"], st["flavor"], st["N"], st["level"])]
    for c in report["checks"]:
        line = "  %-40s %s" % (c["name"], c["status"])
        if "witness" in c:
            line += " at %s" % (", ".join(str(w) for w in c["witness"]) if isinstance(c["witness"], list) else c["witness"])
        if "defect" in c:
            line += "  defect: %s" % c["defect"]
        if "note" in c:
            line += "  (%s)" % c["note"]
        lines.append(line)
    for k, v in report["result"].items():
        lines.append("  %s: %s" % (k, json.dumps(v, sort_keys=True)))
    return "\n".join(lines) + "\n"


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        report, code = run(args)
    except InputError as e:
        sys.stderr.write("input error: %s\n" % e)
        return 2
    if args.output == "json":
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())

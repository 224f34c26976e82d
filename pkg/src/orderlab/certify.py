"""Reports, their two serializations, and the independent validator.

A report captures one command end to end: the verb, the operand texts
exactly as given, the outcome, the rule trace, a certificate, and the
timing.  Everything except the timing is deterministic, and the
validator recomputes rather than trusts:

  * mechanical certificate kinds (decomposition, canonical-words,
    fin-pcvx, term-pcvx, value) are replayed directly against the
    definitions they certify, without consulting the decision engine;
  * every report is additionally re-executed from its operand texts and
    must reproduce the stored outcome, rule trace, detail, and
    certificate byte for byte.

Two serializations carry the same tree: an indented key-value text
format and JSON.  All leaves are strings so the formats round trip
through each other.
"""

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import arcknot, circular, condense, dsl, embed, ordinals, terms
from .circular import Arc, CircSeg, CircTerm, ConvexPartition, FinCirc, PcvxWitness
from .embed import canon_word, format_term, format_word, word_supported
from .terms import Sum, Term

FORMAT_VERSION = "1"

DECISION_VERBS = ("iso", "embed", "cvx", "bicvx", "circ", "arc", "knot")
VALUE_VERBS = ("normalize", "condense", "classify", "intervals", "reduce")
CIRC_RELS = ("iso_c", "embed_c", "cvx_c", "pcvx")
EMPTY_MARK = "(empty)"


class CliError(ValueError):
    """Bad arguments or operands outside a verb's domain."""


@dataclass(frozen=True)
class Report:
    verb: str
    operands: Tuple[str, ...]
    outcome: str
    rule_trace: Tuple[str, ...] = ()
    certificate: Optional[dict] = None
    detail: str = ""
    timing_ms: str = "0.00"


def exit_code(r: Report) -> int:
    if r.outcome in ("unknown", "Unknown"):
        return 2
    return 0


# ---------------------------------------------------------------------------
# profile rendering (for the condense verb)


def _fmt_shape(shape) -> str:
    if shape == condense.SHAPE_W:
        return "w"
    if shape == condense.SHAPE_WSTAR:
        return "w*"
    if shape == condense.SHAPE_Z:
        return "z"
    return str(shape[1])


def format_segment(seg) -> str:
    if isinstance(seg, condense.RunSeg):
        return "run(%s)" % ",".join(_fmt_shape(s) for s in seg.shapes)
    if isinstance(seg, condense.OrdSeg):
        return "w-classes over ord(%s)" % ordinals.format_ordinal(seg.gamma)
    if isinstance(seg, condense.OrdStarSeg):
        return "w*-classes over rev(ord(%s))" % ordinals.format_ordinal(seg.gamma)
    if isinstance(seg, condense.DenseSeg):
        if seg.sizes is not None:
            return "dense sizes %s" % dsl.format_setdesc(seg.sizes)
        lo, hi = seg.once
        return "dense one-shot sizes on (%s,%s) scale %d" % (
            "-inf" if lo is None else lo,
            "inf" if hi is None else hi,
            seg.scale,
        )
    if isinstance(seg, condense.UniformSeg):
        return "%s-classes over %s" % (_fmt_shape(seg.shape), format_term(seg.skel))
    return repr(seg)


def format_profile(p) -> str:
    body = "; ".join(format_segment(s) for s in p.segments)
    return body + (" (cyclic)" if p.cyclic else "")


# ---------------------------------------------------------------------------
# operand parsing helpers


def _parse_order(text: str) -> Term:
    v = dsl.parse_term(text)
    if not isinstance(v, Term):
        raise CliError("expected an order term, got %r" % text)
    return v


def _parse_circ_operand(text: str):
    v = dsl.parse_term(text)
    if not isinstance(v, (FinCirc, CircTerm)):
        raise CliError("expected a circular order C[...], got %r" % text)
    return v


def _parse_arc_operand(text: str) -> arcknot.ArcDescriptor:
    s = text.strip()
    if not s.startswith("arc"):
        s = "arc: " + s
    v = dsl.parse_term(s)
    if not isinstance(v, arcknot.ArcDescriptor):
        raise CliError("expected an arc descriptor, got %r" % text)
    return v


def _parse_knot_operand(text: str) -> arcknot.KnotDescriptor:
    return dsl.parse_knot(text)


def _parse_fracs(text: str) -> Tuple[Fraction, ...]:
    body = text.strip()
    if not body:
        return ()
    return tuple(Fraction(part.strip()) for part in body.split(","))


# ---------------------------------------------------------------------------
# certificates


def _cert_decomposition(w: embed.Witness) -> dict:
    return {
        "kind": "decomposition",
        "left": format_term(w.left) if w.left is not None else EMPTY_MARK,
        "right": format_term(w.right) if w.right is not None else EMPTY_MARK,
    }


def _cert_canonical(t: Term, u: Term) -> dict:
    return {
        "kind": "canonical-words",
        "left-word": format_word(canon_word(t)),
        "right-word": format_word(canon_word(u)),
    }


def _arc_text(a: Arc) -> str:
    label = "-" if a.label is None else str(a.label)
    return "%s|%s" % (label, format_term(a.order))


def _arc_of_text(s: str) -> Arc:
    label, body = s.split("|", 1)
    lab = None if label == "-" else int(label)
    return Arc(lab, _parse_order(body))


def _cert_witness(w: PcvxWitness) -> Optional[dict]:
    if isinstance(w.source, FinCirc):
        f = dict(w.embedding)
        return {
            "kind": "fin-pcvx",
            "map": ["%d -> %d" % (x, f[x]) for x in sorted(f)],
            "pieces": [" ".join(str(x) for x in p) for p in w.partition.pieces],
        }
    if isinstance(w.embedding, CircSeg):
        return {
            "kind": "term-pcvx",
            "pieces": [format_term(p) for p in w.partition.pieces],
            "source-arcs": [_arc_text(a) for a in w.embedding.source],
            "target-arcs": [_arc_text(a) for a in w.embedding.target],
        }
    return {"kind": "replay"}


def _replay_cert() -> dict:
    return {"kind": "replay"}


def _value_cert(value: str) -> dict:
    return {"kind": "value", "value": value}


# ---------------------------------------------------------------------------
# execution


def _run_linear_decision(verb: str, args: Sequence[str]) -> Report:
    if len(args) != 2:
        raise CliError("%s takes two order terms" % verb)
    t, u = _parse_order(args[0]), _parse_order(args[1])
    dec = embed.decide(verb, t, u)
    cert: Optional[dict] = _replay_cert()
    detail = ""
    if dec.witness is not None:
        if dec.witness.decomposed:
            cert = _cert_decomposition(dec.witness)
        elif dec.witness.kind == "iso":
            cert = _cert_canonical(t, u)
    if dec.refutation is not None:
        detail = "%s: %s" % (dec.refutation.reason, dec.refutation.detail)
    trace = dec.rule_trace
    if dec.witness is not None and not trace:
        trace = dec.witness.rule_trace
    return Report(verb, tuple(args), dec.outcome, trace, cert, _clean(detail))


def _run_circ(args: Sequence[str]) -> Report:
    if len(args) != 3:
        raise CliError("circ takes a relation and two circular orders")
    rel = args[0]
    if rel not in CIRC_RELS:
        raise CliError("circ relation must be one of %s" % ", ".join(CIRC_RELS))
    c = _parse_circ_operand(args[1])
    d = _parse_circ_operand(args[2])
    if isinstance(c, FinCirc) != isinstance(d, FinCirc):
        raise CliError("cannot mix a finite circle with a wrapped term")
    dec = circular.decide_c(rel, c, d)
    cert = _cert_witness(dec.witness) if dec.witness is not None else _replay_cert()
    detail = ""
    if dec.refutation is not None:
        detail = "%s: %s" % (dec.refutation.reason, dec.refutation.detail)
    trace = dec.rule_trace
    if dec.witness is not None and not trace:
        trace = tuple(dec.witness.rule_trace)
    return Report("circ", tuple(args), dec.outcome, trace, cert, _clean(detail))


def _run_arc(args: Sequence[str]) -> Report:
    if len(args) != 2:
        raise CliError("arc takes two arc descriptors")
    a = _parse_arc_operand(args[0])
    b = _parse_arc_operand(args[1])
    dec = arcknot.decide_subarc(a, b)
    return Report(
        "arc", tuple(args), dec.outcome, (dec.rule,), _replay_cert(),
        _clean("; ".join(dec.evidence)),
    )


def _run_knot(args: Sequence[str]) -> Report:
    if len(args) != 2:
        raise CliError("knot takes two knot descriptors")
    k = _parse_knot_operand(args[0])
    kp = _parse_knot_operand(args[1])
    dec = arcknot.decide_subknot(k, kp)
    return Report(
        "knot", tuple(args), dec.outcome, (dec.rule,), _replay_cert(),
        _clean("; ".join(dec.evidence)),
    )


def _run_normalize(args: Sequence[str]) -> Report:
    if len(args) != 1:
        raise CliError("normalize takes one term")
    v = dsl.parse_term(args[0])
    if isinstance(v, Term):
        value = format_term(v)
        w = canon_word(terms.normalize(v))
        detail = (
            "canonical word: %s" % format_word(w)
            if word_supported(w)
            else "outside the canonical-word fragment"
        )
    elif isinstance(v, (FinCirc, CircTerm)):
        value = dsl.format_value(v if isinstance(v, FinCirc) else CircTerm(terms.normalize(v.base)))
        detail = ""
    else:
        value = dsl.format_value(arcknot.normalize_arc(v))
        detail = ""
    return Report("normalize", tuple(args), value, (), _value_cert(value), detail)


def _run_condense(args: Sequence[str]) -> Report:
    if len(args) != 1:
        raise CliError("condense takes one order term")
    t = _parse_order(args[0])
    prof = condense.condense(t)
    value = format_term(prof.skeleton)
    return Report(
        "condense", tuple(args), value, (), _value_cert(value),
        "segments: " + format_profile(prof),
    )


def _run_classify(args: Sequence[str]) -> Report:
    if len(args) != 1:
        raise CliError("classify takes one order term")
    t = _parse_order(args[0])
    value = embed.compressibility(t).value
    return Report("classify", tuple(args), value, (), _value_cert(value))


def _run_intervals(args: Sequence[str]) -> Report:
    if len(args) != 2 or args[0] not in ("closed", "final", "initial"):
        raise CliError("intervals takes a kind (closed, final, initial) and a term")
    t = _parse_order(args[1])
    try:
        fam = embed.infinite_intervals(t, args[0])
    except embed.NotFinitelyDescribable as ex:
        raise CliError("interval family is not finitely describable: %s" % ex)
    value = "[%s]" % ", ".join(format_term(x) for x in fam)
    return Report("intervals", tuple(args), value, (), _value_cert(value))


_LO_MAPS = ("phi0", "phi1", "phi2", "phi3", "psi")
_CO_MAPS = ("circ_iso", "circ_pcvx", "e1")


def _run_reduce(args: Sequence[str]) -> Report:
    if not args:
        raise CliError("reduce takes a map name and its arguments")
    map_id, rest = args[0], args[1:]
    if map_id in _LO_MAPS:
        want = 2 if map_id == "psi" else 1
        if len(rest) != want:
            raise CliError("%s takes %d term(s)" % (map_id, want))
        img = embed.reduce_lo(map_id, tuple(_parse_order(x) for x in rest))
        value = format_term(img)
    elif map_id == "e1":
        if len(rest) != 2:
            raise CliError("e1 takes a prefix and a cycle of rationals")
        img = circular.reduce_co("e1", (_parse_fracs(rest[0]), _parse_fracs(rest[1])))
        value = dsl.format_value(img)
    elif map_id in _CO_MAPS:
        if len(rest) != 1:
            raise CliError("%s takes one order term" % map_id)
        img = circular.reduce_co(map_id, _parse_order(rest[0]))
        value = dsl.format_value(img)
    else:
        raise CliError("unknown reduction map %r" % map_id)
    return Report("reduce", tuple(args), value, (), _value_cert(value))


_RUNNERS = {
    "iso": None,
    "embed": None,
    "cvx": None,
    "bicvx": None,
    "circ": _run_circ,
    "arc": _run_arc,
    "knot": _run_knot,
    "normalize": _run_normalize,
    "condense": _run_condense,
    "classify": _run_classify,
    "intervals": _run_intervals,
    "reduce": _run_reduce,
}


def _clean(s: str) -> str:
    return s.replace("\n", " / ")


def execute(verb: str, args: Sequence[str]) -> Report:
    """Run one command and wrap the result in a report."""
    if verb not in _RUNNERS:
        raise CliError("unknown verb %r" % verb)
    start = time.perf_counter()
    if verb in ("iso", "embed", "cvx", "bicvx"):
        rep = _run_linear_decision(verb, args)
    else:
        rep = _RUNNERS[verb](args)
    ms = (time.perf_counter() - start) * 1000.0
    return Report(
        rep.verb, rep.operands, rep.outcome, rep.rule_trace, rep.certificate,
        rep.detail, "%.2f" % ms,
    )


# ---------------------------------------------------------------------------
# serialization


def report_tree(r: Report) -> dict:
    tree = {
        "orderlab-report": FORMAT_VERSION,
        "verb": r.verb,
        "operands": list(r.operands),
        "outcome": r.outcome,
        "rule-trace": list(r.rule_trace),
        "detail": r.detail,
        "timing-ms": r.timing_ms,
    }
    if r.certificate is not None:
        tree["certificate"] = r.certificate
    return tree


def report_of_tree(tree: dict) -> Report:
    if tree.get("orderlab-report") != FORMAT_VERSION:
        raise CliError("not a version-%s report" % FORMAT_VERSION)
    return Report(
        verb=tree.get("verb", ""),
        operands=tuple(tree.get("operands", ())),
        outcome=tree.get("outcome", ""),
        rule_trace=tuple(tree.get("rule-trace", ())),
        certificate=tree.get("certificate"),
        detail=tree.get("detail", ""),
        timing_ms=tree.get("timing-ms", "0.00"),
    )


def to_json(r: Report) -> str:
    return json.dumps(report_tree(r), indent=2)


def from_json(text: str) -> Report:
    return report_of_tree(json.loads(text))


def _render(node, key: str, indent: int, out: List[str]) -> None:
    pad = "  " * indent
    if isinstance(node, str):
        out.append("%s%s: %s" % (pad, key, node) if node else "%s%s:" % (pad, key))
    elif isinstance(node, list):
        out.append("%s%s:" % (pad, key))
        for item in node:
            out.append("%s  - %s" % (pad, item))
    elif isinstance(node, dict):
        out.append("%s%s:" % (pad, key))
        for k, v in node.items():
            _render(v, k, indent + 1, out)
    else:
        raise CliError("cannot serialize %r" % (node,))


def to_text(r: Report) -> str:
    out: List[str] = []
    for k, v in report_tree(r).items():
        _render(v, k, 0, out)
    return "\n".join(out) + "\n"


def from_text(text: str) -> Report:
    lines = [ln for ln in text.splitlines() if ln.strip()]

    def parse_block(i: int, indent: int):
        node = None
        while i < len(lines):
            ln = lines[i]
            depth = (len(ln) - len(ln.lstrip())) // 2
            if depth < indent:
                break
            body = ln.strip()
            if body.startswith("- "):
                if node is None:
                    node = []
                if not isinstance(node, list):
                    raise CliError("list item inside a mapping at line %d" % (i + 1))
                node.append(body[2:])
                i += 1
                continue
            if ":" not in body:
                raise CliError("expected key: value at line %d" % (i + 1))
            key, _, val = body.partition(":")
            val = val.strip()
            if node is None:
                node = {}
            if not isinstance(node, dict):
                raise CliError("mapping entry inside a list at line %d" % (i + 1))
            if val:
                node[key] = val
                i += 1
                continue
            # empty value: either an empty string or a nested block
            if i + 1 < len(lines):
                nxt = lines[i + 1]
                nd = (len(nxt) - len(nxt.lstrip())) // 2
                if nd > depth:
                    sub, i = parse_block(i + 1, depth + 1)
                    node[key] = sub if sub is not None else ""
                    continue
            node[key] = ""
            i += 1
        return node, i

    tree, _ = parse_block(0, 0)
    if not isinstance(tree, dict):
        raise CliError("not a report")
    return report_of_tree(tree)


def read_report(text: str) -> Report:
    body = text.lstrip()
    if body.startswith("{"):
        return from_json(text)
    return from_text(text)


# ---------------------------------------------------------------------------
# verification


def _check_decomposition(r: Report, cert: dict) -> Optional[str]:
    if r.verb not in ("cvx", "iso", "embed", "bicvx"):
        return "decomposition certificate on verb %s" % r.verb
    src = _parse_order(r.operands[0])
    tgt = _parse_order(r.operands[1])
    parts: List[Term] = []
    if cert.get("left", EMPTY_MARK) != EMPTY_MARK:
        parts.append(_parse_order(cert["left"]))
    parts.append(src)
    if cert.get("right", EMPTY_MARK) != EMPTY_MARK:
        parts.append(_parse_order(cert["right"]))
    rebuilt = parts[0] if len(parts) == 1 else Sum(tuple(parts))
    if not embed.canon_eq(rebuilt, tgt):
        return "flanks do not rebuild the target"
    return None


def _check_canonical(r: Report, cert: dict) -> Optional[str]:
    t = _parse_order(r.operands[0])
    u = _parse_order(r.operands[1])
    lw = format_word(canon_word(t))
    rw = format_word(canon_word(u))
    if lw != cert.get("left-word"):
        return "left canonical word does not recompute"
    if rw != cert.get("right-word"):
        return "right canonical word does not recompute"
    if lw != rw:
        return "canonical words differ"
    return None


def _check_fin_pcvx(r: Report, cert: dict) -> Optional[str]:
    c = _parse_circ_operand(r.operands[1])
    d = _parse_circ_operand(r.operands[2])
    if not isinstance(c, FinCirc) or not isinstance(d, FinCirc):
        return "fin-pcvx certificate needs finite circles"
    try:
        pairs = []
        for item in cert.get("map", ()):
            a, b = item.split("->")
            pairs.append((int(a), int(b)))
        pieces = tuple(
            tuple(int(x) for x in item.split()) for item in cert.get("pieces", ())
        )
    except ValueError:
        return "malformed fin-pcvx certificate"
    f = dict(pairs)
    images = tuple(tuple(f.get(x, -1) for x in p) for p in pieces)
    w = PcvxWitness(c, d, ConvexPartition(pieces), tuple(pairs), images)
    ok, msg = circular.check_witness(w)
    return None if ok else msg


def _check_term_pcvx(r: Report, cert: dict) -> Optional[str]:
    c = _parse_circ_operand(r.operands[1])
    d = _parse_circ_operand(r.operands[2])
    if not isinstance(c, CircTerm) or not isinstance(d, CircTerm):
        return "term-pcvx certificate needs wrapped terms"
    try:
        pieces = tuple(_parse_order(x) for x in cert.get("pieces", ()))
        source = tuple(_arc_of_text(x) for x in cert.get("source-arcs", ()))
        target = tuple(_arc_of_text(x) for x in cert.get("target-arcs", ()))
    except (ValueError, dsl.ParseError):
        return "malformed term-pcvx certificate"
    images = tuple(a for a in target if a.label is not None)
    w = PcvxWitness(c, d, ConvexPartition(pieces), CircSeg(source, target), images)
    ok, msg = circular.check_witness(w)
    return None if ok else msg


_MECHANICAL = {
    "decomposition": _check_decomposition,
    "canonical-words": _check_canonical,
    "fin-pcvx": _check_fin_pcvx,
    "term-pcvx": _check_term_pcvx,
}


def verify_report(r: Report) -> Tuple[bool, str]:
    """Recompute everything the report claims; reject on any mismatch."""
    cert = r.certificate
    if cert is not None:
        kind = cert.get("kind")
        checker = _MECHANICAL.get(kind)
        if checker is not None:
            try:
                msg = checker(r, cert)
            except (CliError, dsl.ParseError, ValueError) as ex:
                return False, "certificate replay failed: %s" % ex
            if msg is not None:
                return False, "certificate rejected: %s" % msg
        elif kind == "value":
            if cert.get("value") != r.outcome:
                return False, "value certificate disagrees with the outcome"
        elif kind != "replay":
            return False, "unknown certificate kind %r" % kind
    try:
        fresh = execute(r.verb, list(r.operands))
    except (CliError, dsl.ParseError, ValueError, TypeError) as ex:
        return False, "re-execution failed: %s" % ex
    if fresh.outcome != r.outcome:
        return False, "outcome does not recompute (%s vs %s)" % (fresh.outcome, r.outcome)
    if tuple(fresh.rule_trace) != tuple(r.rule_trace):
        return False, "rule trace does not recompute"
    if fresh.detail != r.detail:
        return False, "detail does not recompute"
    ft = fresh.certificate or {"kind": "replay"}
    rt = cert or {"kind": "replay"}
    if ft != rt:
        return False, "certificate does not recompute"
    return True, "ok"

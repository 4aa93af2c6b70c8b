"""Pretty-printer producing text that parses back to the same tree."""

from __future__ import annotations

from typing import Iterable

from . import ast as A


def _num(v: float) -> str:
    return repr(float(v))


def format_expr(e: A.Expr) -> str:
    match e:
        case A.NumLit(value=v):
            return _num(v)
        case A.RangeLit(lo=lo, hi=hi):
            return f"({_num(lo)}, {_num(hi)})"
        case A.StringLit(value=s):
            q = "'" if '"' in s else '"'
            return f"{q}{s}{q}"
        case A.Vec3Lit():
            return "V3D(" + ", ".join(format_expr(c) for c in e.components) + ")"
        case A.VarRef(name=n):
            return n
        case A.AnchorExpr(tags=tags, target=t):
            return "(" + " ".join(tags) + " " + t.name + ")"
        case A.BinOp(op=op, left=l, right=r):
            rhs = format_expr(r)
            if isinstance(r, A.BinOp):
                rhs = f"({rhs})"
            return f"{format_expr(l)} {op} {rhs}"
        case A.Call(name=n, args=args):
            return f"{n}(" + ", ".join(format_expr(a) for a in args) + ")"
    raise TypeError(f"not an expression: {e!r}")


def format_specifier(s: A.Specifier) -> str:
    match s:
        case A.With(name=n, value=v):
            return f"with {n} {format_expr(v)}"
        case A.At(value=v, relative_to=r):
            out = f"at {format_expr(v)}"
            return out + (f" relative to {format_expr(r)}" if r is not None else "")
        case A.Beyond(target=t, by=b, origin=o):
            return f"beyond {format_expr(t)} by {format_expr(b)} from {format_expr(o)}"
        case A.In(region=r):
            return f"in {format_expr(r)}"
        case A.Directional(direction=d, of=o):
            return f"{d} of {format_expr(o)}"
        case A.On(target=t, completely=c):
            return ("completely " if c else "") + f"on {format_expr(t)}"
        case A.AlignedWith(target=t, axis=ax):
            return f"aligned with {format_expr(t)} along {ax}"
        case A.Facing(direction=d):
            return f"facing {format_expr(d)}"
        case A.FacingToward(target=t):
            return f"facing towards {format_expr(t)}"
    raise TypeError(f"not a specifier: {s!r}")


def format_decl(d: A.ObjectDecl) -> str:
    head = (f"{d.binding} = " if d.binding is not None else "") + d.class_name
    if not d.specifiers:
        return head
    return head + " " + ",\n    ".join(format_specifier(s) for s in d.specifiers)


def format_spec(spec: A.SpecAST) -> str:
    return "\n".join(format_decl(d) for d in spec.declarations) + "\n"


def format_models(models: Iterable[A.ModelClass]) -> str:
    chunks = []
    for m in models:
        lines = [f"class {m.name}:"]
        lines += [f"    {k}: {format_expr(v)}" for k, v in m.defaults.items()]
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"

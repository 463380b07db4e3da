"""Divisor-class ledgers, named cones of the models, and the Fano test."""

from __future__ import annotations

from fractions import Fraction

from .cones import ConeQ, DivClass, cone_of, gkz_decomposition, primitive
from .errors import ValidationError

K_BASIS = ("Delta", "D_unb")


def s_basis(r: int) -> tuple[str, ...]:
    return ("H",) + tuple(f"E{i}" for i in range(1, r))


def _cls(basis, coords, name) -> DivClass:
    return DivClass(basis, tuple(coords), name)


def ledger_S(r: int) -> dict[str, DivClass]:
    """Classes of the boundary divisors, colors and special divisors.

    Complete for r = 2, 3. For r >= 4 only the H-coefficients are known;
    the exceptional coefficients are left as unknown markers (None).
    """
    if not isinstance(r, int) or r < 2:
        raise ValidationError("ledger_S needs r >= 2")
    B = s_basis(r)
    if r == 2:
        table = {"D1": (1, 0), "D2": (2, -1), "E1": (0, 1), "S": (2, -2)}
    elif r == 3:
        table = {
            "D1": (1, 0, 0),
            "D2": (2, -1, 0),
            "D3": (3, -2, -1),
            "E1": (0, 1, 0),
            "E2": (0, 0, 1),
            "S": (2, -2, -2),
            "P": (3, -1, -1),
        }
    else:
        unknown = (None,) * (r - 1)
        table = {f"D{i}": (i,) + unknown for i in range(1, r + 1)}
        for i in range(1, r):
            table[f"E{i}"] = tuple(int(j == i) for j in range(r))
        table["S"] = (2,) + unknown
    return {name: _cls(B, coords, name) for name, coords in table.items()}


def ledger_K(r: int) -> dict[str, DivClass]:
    """Classes on the space of conics in LG(r, 2r), in the basis (Delta, D_unb).

    ``antiK`` is the anticanonical class of the coarse space; ``antiK_stack``
    is the one of the stack, which differs only for r = 2.
    """
    if not isinstance(r, int) or r < 2:
        raise ValidationError("ledger_K needs r >= 2")
    Delta = _cls(K_BASIS, (1, 0), "Delta")
    Dunb = _cls(K_BASIS, (0, 1), "D_unb")
    H = _cls(K_BASIS, (Fraction(1, 2), 1), "H_sigma2")
    T = _cls(K_BASIS, (1, 1), "T")
    if r == 2:
        antiK = 5 * H - 2 * Dunb
        stack = 5 * H - 5 * Dunb
    else:
        antiK = 5 * H + Fraction(r - 7, 2) * Dunb
        stack = antiK
    return {
        "Delta": Delta,
        "D_unb": Dunb,
        "H_sigma2": H,
        "T": T,
        "antiK": DivClass(K_BASIS, antiK.coords, "antiK"),
        "antiK_stack": DivClass(K_BASIS, stack.coords, "antiK_stack"),
    }


def _parse_space(space) -> tuple[str, int | None]:
    if isinstance(space, tuple):
        tag, r = space
        if tag != "K":
            raise ValidationError(f"unknown space {space!r}")
        return "K", int(r)
    s = str(space).strip()
    if s in ("S4", "S6"):
        return s, None
    if s.startswith("K(") and s.endswith(")"):
        try:
            return "K", int(s[2:-1])
        except ValueError as exc:
            raise ValidationError(f"bad space tag {space!r}") from exc
    raise ValidationError(f"unknown space {space!r}")


def _ray_name(ledger: dict[str, DivClass], ray) -> str:
    for name, c in ledger.items():
        if c.known and name not in ("antiK", "antiK_stack") and primitive(c.vector()) == ray:
            return name
    return str(list(ray))


def cones_of_models(space) -> dict:
    """Eff, Nef and Mov of one of S4, S6 or K(r), plus the labeled chamber fan."""
    tag, r = _parse_space(space)
    walls: dict[str, str] = {}
    if tag == "S4":
        L = ledger_S(2)
        gens = [L[n] for n in ("D1", "D2", "E1", "S")]
        eff = cone_of([L["E1"], L["S"]])
        nef = cone_of([L["D1"], L["D2"]])
        mov = nef
    elif tag == "S6":
        L = ledger_S(3)
        gens = [L[n] for n in ("D1", "D2", "D3", "E1", "E2", "S")]
        eff = cone_of([L["E1"], L["E2"], L["S"]])
        nef = cone_of([L["D1"], L["D2"], L["D3"]])
        mov = cone_of([L["D1"], L["D2"], L["D3"], L["P"]])
    else:
        if r is None or r < 2:
            raise ValidationError("K(r) needs r >= 2")
        L = ledger_K(r)
        gens = [L[n] for n in ("Delta", "D_unb", "H_sigma2", "T")]
        eff = cone_of([L["Delta"], L["D_unb"]])
        nef = cone_of([L["H_sigma2"], L["T"]])
        mov = cone_of([L["T"], L["D_unb"]]) if r > 2 else cone_of([L["T"], L["H_sigma2"]])
        walls = {"H_sigma2": "Chow contraction", "T": "weighted stable maps"}
    fan = gkz_decomposition(gens)
    fan.labels = [_chamber_labels(tag, r, ch, nef, mov, L) for ch in fan.chambers]
    return {
        "space": tag if r is None else f"K({r})",
        "Eff": eff,
        "Nef": nef,
        "Mov": mov,
        "fan": fan,
        "walls": walls,
        "ledger": L,
    }


def _chamber_labels(tag, r, ch: ConeQ, nef: ConeQ, mov: ConeQ, L) -> list[str]:
    names = sorted(_ray_name(L, g) for g in ch.rays)
    labels = ["rays:" + ",".join(names)]
    if ch == nef:
        labels.append("nef")
    inside_mov = all(mov.contains(g) for g in ch.rays)
    labels.append("movable" if inside_mov else "big-non-movable")
    if tag == "K" and r is not None and r > 2 and set(names) == {"D_unb", "H_sigma2"}:
        labels.append(f"model:Grassmannian fibration over SG({r - 2},{2 * r})")
    if ch == nef:
        labels.append("model:" + ("S4" if tag == "S4" else "S6" if tag == "S6" else f"K({r})"))
    return labels


FANO = "Fano"
WEAK_FANO = "weak-Fano"
NOT_AMPLE = "not-ample"


def fano_type(r: int) -> str:
    """Position of the coarse anticanonical class relative to Nef and Eff."""
    if not isinstance(r, int) or r < 2:
        raise ValidationError("fano_type needs r >= 2")
    L = ledger_K(r)
    models = cones_of_models(("K", r))
    nef, eff = models["Nef"], models["Eff"]
    k = L["antiK"].vector()
    if nef.contains_interior(k):
        return FANO
    if nef.on_boundary_ray(k) and eff.contains_interior(k):
        return WEAK_FANO
    if eff.contains(k):
        return NOT_AMPLE
    raise ValidationError("anticanonical class is not effective")


def fano_threshold(r: int) -> str:
    """Closed-form version of :func:`fano_type`, for cross-checking."""
    if 2 <= r <= 6:
        return FANO
    if r == 7:
        return WEAK_FANO
    return NOT_AMPLE


def ledger_relations(r: int) -> dict[str, bool]:
    L = ledger_K(r)
    return {
        "2H_sigma2 - Delta - 2D_unb = 0": (2 * L["H_sigma2"] - L["Delta"] - 2 * L["D_unb"]).is_zero(),
        "T - Delta - D_unb = 0": (L["T"] - L["Delta"] - L["D_unb"]).is_zero(),
    }

"""Regenerate the JSON documents in ``fixtures/`` from ``congames.fixtures``."""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from congames import fixtures as F
from congames.document import Document, Symmetry, save_document
from congames.dsl import MapDef
from congames.es_core import build, configurations, identity_map
from congames.games import Game, LevelOrder
from congames.outcomes import PayoffSpec, WinningSpec
from congames.quantum import PROJECTION, UNITARY, QuantumES
from congames.strategy import make_strategy
from congames.symmetry import IsoFamily, identity_on


def with_level(g: Game, level: dict, name: str) -> Game:
    return Game(g.es, dict(g.polarity), level, name)


def seq_doc() -> Document:
    g = F.g_seq()
    doc = Document(games={"G_seq": g})
    doc.games["G_seq_flat"] = with_level(g, {"o": "l1", "p": "l1"}, "G_seq_flat")
    doc.games["G_seq_bad"] = with_level(g, {"o": "l2", "p": "l1"}, "G_seq_bad")
    doc.levels = LevelOrder(frozenset({"l1", "l2"}), frozenset({("l1", "l2")}))
    doc.maps["id_seq"] = MapDef(identity_map(g.es), "G_seq", "G_seq")
    doc.strategies["S_seq"] = F.s_seq()
    return doc


def conc_doc() -> Document:
    g = F.g_conc()
    doc = Document(games={"G_conc": g})
    up = with_level(g, {"o": "l1", "p": "l2"}, "G_conc_up")
    inc = with_level(g, {"o": "l1", "p": "l3"}, "G_conc_inc")
    doc.games.update({"G_conc_up": up, "G_conc_inc": inc})
    doc.levels = LevelOrder(frozenset({"l1", "l2", "l3"}), frozenset({("l1", "l2")}))
    doc.strategies["S_i"] = F.s_i()
    doc.strategies["S_ii"] = F.s_ii()
    doc.strategies["S_conc_eager"] = F.s_conc_eager()
    s = F.s_i()
    doc.strategies["S_i_up"] = make_strategy(up, s.es, s.sigma, name="S_i_up")
    doc.strategies["S_i_inc"] = make_strategy(inc, s.es, s.sigma, name="S_i_inc")
    return doc


def race_doc() -> Document:
    return Document(games={"G_race": F.g_race()})


def watch_doc() -> Document:
    g = F.g_watch()
    doc = Document(games={"G_watch": g})
    doc.strategies["S_watch"] = F.s_watch()
    doc.strategies["S_watch_min"] = F.s_watch_min()
    for t in (F.tau_half(), F.tau_a(), F.tau_b()):
        doc.strategies[t.name] = t
    doc.payoffs["G_watch"] = PayoffSpec(g, F.watch_payoff())
    doc.winning["G_watch"] = WinningSpec(g, F.WATCH_WINNING)
    return doc


def suite_doc() -> Document:
    doc = Document()
    for g in F.race_free_games():
        doc.games[g.name] = g
    for s in F.identity_suite():
        doc.strategies[s.name] = s
    doc.maps["id_seq"] = MapDef(identity_map(F.g_seq().es), "G_seq", "G_seq")
    return doc


def _ket(v):
    v = np.array(v, dtype=complex)
    return np.outer(v, v.conj())


def quantum_doc() -> Document:
    doc = Document()
    zero = _ket([1, 0])
    plus = _ket([1 / np.sqrt(2), 1 / np.sqrt(2)])
    doc.quantum["q_plus"] = QuantumES(build(["e"]), 2, {"e": (PROJECTION, zero)}, plus)
    doc.quantum["q_conflict"] = QuantumES(
        build(["e1", "e2"], conflicts=[["e1", "e2"]]),
        2,
        {"e1": (PROJECTION, zero), "e2": (PROJECTION, plus)},
        zero,
    )
    # two qubits; concurrent events act on different qubits
    i2 = np.eye(2)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.diag([1, -1]).astype(complex)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    es = build(
        ["a", "b", "c", "d", "f"],
        [("a", "c"), ("b", "d"), ("c", "f"), ("d", "f")],
    )
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    doc.quantum["q_two_qubits"] = QuantumES(
        es,
        4,
        {
            "a": (UNITARY, np.kron(x, i2)),
            "b": (UNITARY, np.kron(i2, z)),
            "c": (PROJECTION, np.kron(zero, i2)),
            "d": (UNITARY, np.kron(i2, h)),
            "f": (UNITARY, cnot),
        },
        rho,
    )
    return doc


def symmetry_doc() -> Document:
    doc = Document(games={"G_one": F.g_one(), "G_two": F.g_two()})
    for s in (F.s_twin(), F.s_single(), F.s_left(), F.s_right()):
        doc.strategies[s.name] = s

    def family(es, extra):
        bij = [frozenset(map(tuple, t)) for t in extra]
        bij += [identity_on(x) for x in configurations(es)]
        return IsoFamily(es, frozenset(bij))

    twin = doc.strategies["S_twin"]
    doc.symmetries["twin_swap"] = Symmetry(("strategy", "S_twin"), family(twin.es, F.TWIN_SWAP))
    doc.symmetries["twin_id"] = Symmetry(("strategy", "S_twin"), family(twin.es, []))
    single = doc.strategies["S_single"]
    doc.symmetries["single_id"] = Symmetry(("strategy", "S_single"), family(single.es, []))
    two = doc.games["G_two"]
    doc.symmetries["two_swap"] = Symmetry(("game", "G_two"), family(two.es, F.TWO_SWAP))
    doc.symmetries["two_id"] = Symmetry(("game", "G_two"), family(two.es, []))
    return doc


DOCS = {
    "g_seq.json": seq_doc,
    "g_conc.json": conc_doc,
    "g_race.json": race_doc,
    "g_watch.json": watch_doc,
    "suite.json": suite_doc,
    "quantum.json": quantum_doc,
    "symmetry.json": symmetry_doc,
}

DSL = {
    "copycat_seq.sdsl": "# copy-cat on G_seq\nx:G_seq |- y <=[G_seq] x -| y:G_seq\n",
    "copycat_watch.sdsl": "x:G_watch |- y <=[G_watch] x -| y:G_watch\n",
    "inj_proj.sdsl": (
        "# first injection into a sum, then the matching projection\n"
        "x:G_seq |- (y <=[Sum[G_seq, G_player]] inj<1> x ; inj<1> z <=[Sum[G_seq, G_player]] y) -| z:G_seq\n"
    ),
    "push_id.sdsl": "x:G_seq |- push[id_seq](x, y) -| y:G_seq\n",
    "pull_id.sdsl": "y:G_seq |- pull[id_seq](y, x) -| x:G_seq\n",
    "rewired.sdsl": "# copy-cat with its input moved to the right\n|- y <=[G_seq] x -| y:G_seq, x:~G_seq\n",
    "split.sdsl": "z:G_seq || G_conc |- (x, y) <=[G_seq || G_conc] z -| x:G_seq, y:G_conc\n",
    "trace.sdsl": "x:G_conc |- trace u=v. (v, y) <=[G_conc || G_conc] (x, u) -| y:G_conc\n",
    "empty_sum.sdsl": "|- sum() -| y:G_seq\n",
    "mu.sdsl": "|- mu u:G_seq. y <=[G_seq] u -| y:G_seq\n",
    "conj.sdsl": "x:G_seq |- (y <=[G_seq] x /\\ y <=[G_seq] x) -| y:G_seq\n",
    "sum.sdsl": "x:G_seq |- sum(y <=[G_seq] x, y <=[G_seq] x) -| y:G_seq\n",
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in DOCS.items():
        save_document(make(), out / name)
    (out / "dsl").mkdir(exist_ok=True)
    for name, text in DSL.items():
        (out / "dsl" / name).write_text(text, encoding="utf-8")
    (out / "empty.json").write_text("{}\n", encoding="utf-8")


if __name__ == "__main__":
    main()

"""Load and write system definition files (JSON, rationals as "p/q" strings or integers)."""
import json
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..algebra.ratmat import RationalVector, to_rational
from ..config import CADENCES, INFORMATION_MODES, SEP_RULES
from .types import FNG, InitialCondition, LocalUtility, StateSpec, SystemDefinition

MODES = ("fixed", "state_based")
OBJECTIVE_TYPES = ("vector", "consensus", "edge_potential_sum")


class DefinitionError(ValueError):
    """Schema violation in a definition file; `field` is the offending path, e.g. 'states[1].edges'."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


def _rational(value: Any, field: str) -> Fraction:
    if isinstance(value, float):
        raise DefinitionError(field, f"floats are not exact; write {value!r} as a 'p/q' string")
    try:
        return to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise DefinitionError(field, f"not a rational number: {value!r}") from e


def _vector(values: Any, field: str, length: Optional[int] = None) -> RationalVector:
    if not isinstance(values, list):
        raise DefinitionError(field, "expected an array")
    out = tuple(_rational(v, f"{field}[{j}]") for j, v in enumerate(values))
    if length is not None and len(out) != length:
        raise DefinitionError(field, f"has length {len(out)}, expected {length}")
    return out


def _int(value: Any, field: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DefinitionError(field, f"expected an integer, got {value!r}")
    if value < minimum:
        raise DefinitionError(field, f"must be >= {minimum}, got {value}")
    return value


def _choice(value: Any, field: str, allowed: Tuple[str, ...]) -> str:
    if value not in allowed:
        raise DefinitionError(field, f"must be one of {list(allowed)}, got {value!r}")
    return value


def _edges(values: Any, field: str, n: int) -> Tuple[Tuple[int, int], ...]:
    if not isinstance(values, list):
        raise DefinitionError(field, "expected an array of [i, j] pairs")
    out = set()
    for idx, e in enumerate(values):
        where = f"{field}[{idx}]"
        if not isinstance(e, list) or len(e) != 2:
            raise DefinitionError(where, "an edge is a pair [i, j]")
        i, j = (_int(v, where, 1) for v in e)
        if i > n or j > n:
            raise DefinitionError(where, f"references a node outside 1..{n}")
        if i == j:
            raise DefinitionError(where, "self-loops are not allowed")
        out.add((min(i, j), max(i, j)))
    return tuple(sorted(out))


def _states(values: Any, n: int) -> Tuple[StateSpec, ...]:
    if not isinstance(values, list) or not values:
        raise DefinitionError("states", "state_based mode needs a nonempty array of states")
    specs = []
    for x, s in enumerate(values):
        where = f"states[{x}]"
        if not isinstance(s, dict) or not isinstance(s.get("label"), str):
            raise DefinitionError(where, "a state is {label: str, edges: [...]}")
        specs.append(StateSpec(label=s["label"], edges=_edges(s.get("edges", []), f"{where}.edges", n)))
    labels = [s.label for s in specs]
    if len(set(labels)) != len(labels):
        raise DefinitionError("states", f"duplicate labels in {labels}")
    return tuple(specs)


def _objective(data: Any, size: int, r: int, mode: str) -> Tuple[str, Tuple]:
    if not isinstance(data, dict):
        raise DefinitionError("objective", "expected an object with a 'type'")
    kind = _choice(data.get("type"), "objective.type", OBJECTIVE_TYPES)
    if kind == "vector":
        blocks = data.get("blocks")
        if not isinstance(blocks, list) or len(blocks) != r:
            raise DefinitionError("objective.blocks", f"expected {r} block(s)")
        return kind, tuple(_vector(b, f"objective.blocks[{x}]", size) for x, b in enumerate(blocks))
    if kind == "consensus":
        if mode != "state_based":
            raise DefinitionError("objective.type", "the consensus objective is state based")
        return kind, ()
    if "potential" in data:
        return kind, _vector(data["potential"], "objective.potential")
    return kind, ()


def _fng(data: Any, k: Tuple[int, ...]) -> FNG:
    if not isinstance(data, dict):
        raise DefinitionError("fng", "expected {row: [...], col: [...]}")
    k_row = _int(data.get("k_row", k[0]), "fng.k_row", 2)
    k_col = _int(data.get("k_col", k_row), "fng.k_col", 2)
    size = k_row * k_col
    return FNG(k_row, k_col, _vector(data.get("row"), "fng.row", size), _vector(data.get("col"), "fng.col", size))


def _utilities(values: Any, k: Tuple[int, ...], labels: List[str]) -> Tuple[LocalUtility, ...]:
    if not isinstance(values, list):
        raise DefinitionError("utilities", "expected an array")
    n = len(k)
    out = []
    seen = set()
    for idx, u in enumerate(values):
        where = f"utilities[{idx}]"
        if not isinstance(u, dict):
            raise DefinitionError(where, "expected {player, vector, neighborhood?, state?}")
        player = _int(u.get("player"), f"{where}.player", 1)
        if player > n:
            raise DefinitionError(f"{where}.player", f"outside 1..{n}")
        state = u.get("state")
        if labels and state not in labels:
            raise DefinitionError(f"{where}.state", f"must be one of {labels}, got {state!r}")
        if not labels and state is not None:
            raise DefinitionError(f"{where}.state", "fixed mode utilities take no state")
        hood = u.get("neighborhood", list(range(1, n + 1)))
        if not isinstance(hood, list) or any(isinstance(j, bool) or not isinstance(j, int) or not 1 <= j <= n for j in hood):
            raise DefinitionError(f"{where}.neighborhood", f"expected player indices in 1..{n}")
        hood = tuple(sorted(set(hood)))
        if player not in hood:
            raise DefinitionError(f"{where}.neighborhood", f"must contain player {player}")
        vector = _vector(u.get("vector"), f"{where}.vector", prod(k[j - 1] for j in hood))
        if (state, player) in seen:
            raise DefinitionError(where, f"duplicate utility for player {player}" + (f" in state {state}" if state else ""))
        seen.add((state, player))
        out.append(LocalUtility(player=player, neighborhood=hood, vector=vector, state=state))
    expected = {(s, i) for s in (labels or [None]) for i in range(1, n + 1)}
    if out and seen != expected:
        missing = sorted(expected - seen, key=lambda p: (str(p[0]), p[1]))
        raise DefinitionError("utilities", f"incomplete; missing (state, player) {missing}")
    return tuple(out)


def _initial(values: Any, k: Tuple[int, ...], labels: List[str]) -> Tuple[InitialCondition, ...]:
    if not isinstance(values, list):
        raise DefinitionError("initial", "expected an array")
    out = []
    for idx, c in enumerate(values):
        where = f"initial[{idx}]"
        if not isinstance(c, dict):
            raise DefinitionError(where, "expected {profile, state?}")
        profile = c.get("profile")
        if not isinstance(profile, list) or len(profile) != len(k):
            raise DefinitionError(f"{where}.profile", f"expected {len(k)} strategies")
        for i, (ai, ki) in enumerate(zip(profile, k), start=1):
            if isinstance(ai, bool) or not isinstance(ai, int) or not 1 <= ai <= ki:
                raise DefinitionError(f"{where}.profile", f"strategy of player {i} must lie in 1..{ki}")
        state = c.get("state")
        if labels and state not in labels:
            raise DefinitionError(f"{where}.state", f"must be one of {labels}")
        if not labels and state is not None:
            raise DefinitionError(f"{where}.state", "fixed mode initial conditions take no state")
        out.append(InitialCondition(profile=tuple(profile), state=state))
    return tuple(out)


def load_definition_from_dict(data: Dict[str, Any]) -> SystemDefinition:
    """Build a SystemDefinition from an in-memory dict.

    Raises:
        DefinitionError: On any schema violation, naming the offending field.
    """
    if not isinstance(data, dict):
        raise DefinitionError("<root>", "expected a JSON object")
    players = _int(data.get("players"), "players", 1)
    cardinalities = data.get("cardinalities")
    if not isinstance(cardinalities, list) or len(cardinalities) != players:
        raise DefinitionError("cardinalities", f"expected {players} entries")
    k = tuple(_int(v, f"cardinalities[{i}]", 2) for i, v in enumerate(cardinalities))
    mode = _choice(data.get("mode", "fixed"), "mode", MODES)

    states: Tuple[StateSpec, ...] = ()
    edges: Tuple[Tuple[int, int], ...] = ()
    if mode == "state_based":
        states = _states(data.get("states"), players)
    else:
        edges = _edges(data.get("edges", []), "edges", players)
    labels = [s.label for s in states]

    objective = None
    if "objective" in data:
        objective = _objective(data["objective"], prod(k), max(1, len(states)), mode)
    fng = _fng(data["fng"], k) if "fng" in data else None
    if objective is not None and objective[0] == "edge_potential_sum" and fng is None and not objective[1]:
        raise DefinitionError("objective.potential", "edge_potential_sum needs a potential or an fng")

    epsilon = None
    if "epsilon" in data:
        epsilon = _rational(data["epsilon"], "epsilon")
        if not 0 < epsilon < 1:
            raise DefinitionError("epsilon", f"must lie in (0, 1), got {epsilon}")
    sur = data.get("sur", {})
    if not isinstance(sur, dict):
        raise DefinitionError("sur", "expected {cadence, information}")
    seed = data.get("seed")
    if seed is not None:
        seed = _int(seed, "seed", 0)

    return SystemDefinition(
        name=str(data.get("name", "unnamed")),
        players=players,
        cardinalities=k,
        mode=mode,
        edges=edges,
        states=states,
        objective=objective,
        fng=fng,
        utilities=_utilities(data.get("utilities", []), k, labels),
        sep=_choice(data["sep"], "sep", SEP_RULES) if "sep" in data else None,
        epsilon=epsilon,
        cadence=_choice(sur["cadence"], "sur.cadence", CADENCES) if "cadence" in sur else None,
        information=_choice(sur["information"], "sur.information", INFORMATION_MODES) if "information" in sur else None,
        seed=seed,
        initial=_initial(data.get("initial", []), k, labels),
    )


def load_definition(path: Union[str, Path]) -> SystemDefinition:
    """Load a definition JSON file.

    Raises:
        FileNotFoundError: If path does not exist.
        DefinitionError: If the file is not valid JSON or violates the schema.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise DefinitionError(f"line {e.lineno}", f"invalid JSON: {e.msg}") from e
    return load_definition_from_dict(data)


def rational_to_json(value: Fraction) -> Union[int, str]:
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def vector_to_json(values) -> List[Union[int, str]]:
    return [rational_to_json(v) for v in values]


def dump_definition(definition: SystemDefinition) -> Dict[str, Any]:
    """JSON-ready dict that load_definition_from_dict turns back into an equal definition."""
    out: Dict[str, Any] = {
        "name": definition.name,
        "players": definition.players,
        "cardinalities": list(definition.cardinalities),
        "mode": definition.mode,
    }
    if definition.is_state_based:
        out["states"] = [{"label": s.label, "edges": [list(e) for e in s.edges]} for s in definition.states]
    else:
        out["edges"] = [list(e) for e in definition.edges]
    if definition.objective is not None:
        kind, payload = definition.objective
        obj: Dict[str, Any] = {"type": kind}
        if kind == "vector":
            obj["blocks"] = [vector_to_json(b) for b in payload]
        elif kind == "edge_potential_sum" and payload:
            obj["potential"] = vector_to_json(payload)
        out["objective"] = obj
    if definition.fng is not None:
        f = definition.fng
        out["fng"] = {"k_row": f.k_row, "k_col": f.k_col, "row": vector_to_json(f.row_payoff), "col": vector_to_json(f.col_payoff)}
    if definition.utilities:
        entries = []
        for u in definition.utilities:
            entry: Dict[str, Any] = {"player": u.player, "neighborhood": list(u.neighborhood), "vector": vector_to_json(u.vector)}
            if u.state is not None:
                entry["state"] = u.state
            entries.append(entry)
        out["utilities"] = entries
    if definition.sep is not None:
        out["sep"] = definition.sep
    if definition.epsilon is not None:
        out["epsilon"] = rational_to_json(definition.epsilon)
    sur = {}
    if definition.cadence is not None:
        sur["cadence"] = definition.cadence
    if definition.information is not None:
        sur["information"] = definition.information
    if sur:
        out["sur"] = sur
    if definition.seed is not None:
        out["seed"] = definition.seed
    if definition.initial:
        out["initial"] = [
            ({"state": c.state} if c.state is not None else {}) | {"profile": list(c.profile)}
            for c in definition.initial
        ]
    return out


def write_definition(definition: SystemDefinition, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(dump_definition(definition), f, indent=2)
        f.write("\n")

"""Scenario files, transcripts and attack reports as JSON.

A scenario describes one protocol run and optionally an attack on it::

    {"schema": 1, "protocol": "kolee", "n": 4, "seed": 7,
     "public": {"w": [2], "split": 2},
     "private": {"alice": [[1, 1]], "bob": [[1, 1]]},
     "attack": {"type": "decomposition", "budget": {"max_depth": 4}}}

Ko-Lee publics give either ``split`` or explicit ``A``/``B`` subgroup specs;
AAG publics give ``a`` and ``b``.  Privates are either explicit subgroup words
or ``{"length": L}``, drawn from the scenario seed.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from .attacks import (
    SearchBudget,
    aag_adversary_key,
    build_centralizer_scenario,
    kolee_recover_key,
    solve_decomposition_bruteforce,
    solve_simultaneous_csp,
    verify_aag_conjugacy,
)
from .braid import BraidContext, BraidError, Word, commutes, invert, multiply
from .protocols import (
    AagPublic,
    AagTranscript,
    KoLeePublic,
    KoLeeTranscript,
    ProtocolError,
    aag_key_alice,
    aag_key_bob,
    kolee_key,
    run_aag,
    run_kolee,
)
from .rng import derive_seed
from .subgroups import SubgroupSpec, SubgroupWord, standard_split, subgroup_word_eval
from .instances import random_aag_instance, random_kolee_instance, random_subgroup_word

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario input (CLI exit code 2)."""


class AlgebraicFailure(RuntimeError):
    """An identity the protocols guarantee did not hold (CLI exit code 3)."""


@dataclass(frozen=True)
class Scenario:
    protocol: str
    ctx: BraidContext
    public: Union[KoLeePublic, AagPublic]
    alice: SubgroupWord
    bob: SubgroupWord
    seed: int = 0
    attack: Optional[dict] = None


def _word(obj: Any, what: str) -> Word:
    if not isinstance(obj, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in obj):
        raise ScenarioError(f"{what} must be a list of signed integers")
    if 0 in obj:
        raise ScenarioError(f"{what} contains a zero letter")
    return Word(tuple(obj))


def word_json(w: Word) -> list[int]:
    return list(w.letters)


def bundled_scenarios() -> list[str]:
    root = resources.files("braidkex") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_scenario_json(source: Union[str, Path]) -> dict:
    """Load JSON from a path, or from a bundled scenario by name."""
    path = Path(source)
    try:
        if path.exists():
            text = path.read_text(encoding="utf-8")
        elif str(source) in bundled_scenarios():
            text = (resources.files("braidkex") / "scenarios" / f"{source}.json").read_text(encoding="utf-8")
        else:
            raise ScenarioError(f"no scenario file or bundled scenario named {source!r}")
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON in {source}: {exc}") from exc


def _subgroup(obj: Any, ctx: BraidContext, what: str) -> SubgroupSpec:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{what} must be a subgroup spec object")
    try:
        spec = SubgroupSpec.from_json({"n": ctx.n, **obj})
    except BraidError as exc:
        raise ScenarioError(f"{what}: {exc}") from exc
    if spec.ctx != ctx:
        raise ScenarioError(f"{what} has n={spec.ctx.n}, scenario has n={ctx.n}")
    return spec


def _private(obj: Any, spec: SubgroupSpec, seed: int, tag: int, what: str) -> SubgroupWord:
    if isinstance(obj, dict):
        length = obj.get("length")
        if not isinstance(length, int) or length < 1:
            raise ScenarioError(f"{what}.length must be a positive integer")
        return random_subgroup_word(spec, length, derive_seed(seed, tag))
    try:
        return SubgroupWord.from_json(obj).check(spec)
    except BraidError as exc:
        raise ScenarioError(f"{what}: {exc}") from exc


def parse_scenario(obj: Any) -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError("scenario must be a JSON object")
    if obj.get("schema") != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema {obj.get('schema')!r}, expected {SCHEMA_VERSION}")
    protocol = obj.get("protocol")
    if protocol not in ("kolee", "aag"):
        raise ScenarioError(f"protocol must be 'kolee' or 'aag', got {protocol!r}")
    n = obj.get("n")
    if not isinstance(n, int) or n < 2:
        raise ScenarioError("n must be an integer >= 2")
    seed = obj.get("seed", 0)
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ScenarioError("seed must be an unsigned 64-bit integer")
    ctx = BraidContext(n)
    pub_obj = obj.get("public")
    priv_obj = obj.get("private")
    if not isinstance(pub_obj, dict) or not isinstance(priv_obj, dict):
        raise ScenarioError("scenario needs 'public' and 'private' objects")
    if "alice" not in priv_obj or "bob" not in priv_obj:
        raise ScenarioError("private section needs 'alice' and 'bob'")
    attack = obj.get("attack")
    if attack is not None and not isinstance(attack, dict):
        raise ScenarioError("attack must be an object")

    try:
        if protocol == "kolee":
            w = ctx.check(_word(pub_obj.get("w"), "public.w"))
            if "split" in pub_obj:
                split = pub_obj["split"]
                if not isinstance(split, int):
                    raise ScenarioError("public.split must be an integer")
                A, B = standard_split(n, split)
            else:
                A = _subgroup(pub_obj.get("A"), ctx, "public.A")
                B = _subgroup(pub_obj.get("B"), ctx, "public.B")
            public: Union[KoLeePublic, AagPublic] = KoLeePublic(ctx, w, A, B)
            own_a, own_b = A, B
        else:
            a = _subgroup(pub_obj.get("a"), ctx, "public.a")
            b = _subgroup(pub_obj.get("b"), ctx, "public.b")
            public = AagPublic(ctx, a, b)
            own_a, own_b = a, b
    except (BraidError, ProtocolError) as exc:
        raise ScenarioError(str(exc)) from exc

    alice = _private(priv_obj["alice"], own_a, seed, 1, "private.alice")
    bob = _private(priv_obj["bob"], own_b, seed, 2, "private.bob")
    return Scenario(protocol, ctx, public, alice, bob, seed, attack)


def load_scenario(source: Union[str, Path]) -> Scenario:
    return parse_scenario(read_scenario_json(source))


# -- transcripts ----------------------------------------------------------------


def public_json(public: Union[KoLeePublic, AagPublic]) -> dict:
    if isinstance(public, KoLeePublic):
        return {"n": public.ctx.n, "w": word_json(public.w), "A": public.A.to_json(), "B": public.B.to_json()}
    return {"n": public.ctx.n, "a": public.a_tuple.to_json(), "b": public.b_tuple.to_json()}


def transcript_json(t: Union[KoLeeTranscript, AagTranscript]) -> dict:
    if isinstance(t, KoLeeTranscript):
        return {
            "protocol": "kolee",
            "public": public_json(t.public),
            "messages": {"alice": word_json(t.msg_alice), "bob": word_json(t.msg_bob)},
        }
    return {
        "protocol": "aag",
        "public": public_json(t.public),
        "messages": {"alice": [word_json(w) for w in t.b_conj], "bob": [word_json(w) for w in t.a_conj]},
    }


def transcript_from_json(obj: Any) -> Union[KoLeeTranscript, AagTranscript]:
    try:
        protocol = obj["protocol"]
        pub = obj["public"]
        msgs = obj["messages"]
        ctx = BraidContext(int(pub["n"]))
        if protocol == "kolee":
            public = KoLeePublic(ctx, ctx.check(_word(pub["w"], "w")), _subgroup(pub["A"], ctx, "A"), _subgroup(pub["B"], ctx, "B"))
            return KoLeeTranscript(public, ctx.check(_word(msgs["alice"], "alice")), ctx.check(_word(msgs["bob"], "bob")))
        if protocol == "aag":
            public = AagPublic(ctx, _subgroup(pub["a"], ctx, "a"), _subgroup(pub["b"], ctx, "b"))
            b_conj = tuple(ctx.check(_word(w, "alice")) for w in msgs["alice"])
            a_conj = tuple(ctx.check(_word(w, "bob")) for w in msgs["bob"])
            return AagTranscript(public, b_conj, a_conj)
    except (KeyError, TypeError, BraidError, ProtocolError) as exc:
        raise ScenarioError(f"malformed transcript: {exc}") from exc
    raise ScenarioError(f"unknown protocol {obj.get('protocol')!r}")


# -- commands -------------------------------------------------------------------


def simulate(sc: Scenario) -> dict:
    """Run the honest protocol; raises AlgebraicFailure if the keys differ."""
    if isinstance(sc.public, KoLeePublic):
        t, key_a, key_b = run_kolee(sc.public, sc.alice, sc.bob)
    else:
        t, key_a, key_b = run_aag(sc.public, sc.alice, sc.bob)
    out = {
        "protocol": sc.protocol,
        "transcript": transcript_json(t),
        "keys": {"alice": key_a.hex(), "bob": key_b.hex()},
        "match": key_a.key_bytes == key_b.key_bytes,
    }
    if not out["match"]:
        raise AlgebraicFailure(json.dumps(out))
    return out


def reverify(sc: Scenario, transcript: dict) -> dict:
    """Recompute both keys from the scenario privates and a saved transcript."""
    t = transcript_from_json(transcript)
    if public_json(t.public) != public_json(sc.public):
        raise ScenarioError("transcript public values do not match the scenario")
    if isinstance(t, KoLeeTranscript):
        key_a = kolee_key(t.public, sc.alice, "alice", t.msg_bob)
        key_b = kolee_key(t.public, sc.bob, "bob", t.msg_alice)
    else:
        key_a = aag_key_alice(t.public, sc.alice, t.a_conj)
        key_b = aag_key_bob(t.public, sc.bob, t.b_conj)
    return {"keys": {"alice": key_a.hex(), "bob": key_b.hex()}, "match": key_a.key_bytes == key_b.key_bytes}


def _budget(attack: dict) -> SearchBudget:
    try:
        return SearchBudget.from_json(attack.get("budget", {}))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad attack budget: {exc}") from exc


def attack(sc: Scenario, *, timing: bool = True) -> dict:
    spec = sc.attack or {"type": "decomposition" if sc.protocol == "kolee" else "csp-aag"}
    kind = spec.get("type")
    if sc.protocol == "kolee" and kind == "decomposition":
        report = _attack_decomposition(sc, _budget(spec))
    elif sc.protocol == "aag" and kind == "csp-aag":
        report = _attack_aag(sc, spec)
    else:
        raise ScenarioError(f"attack type {kind!r} does not apply to protocol {sc.protocol!r}")
    if not timing:
        report["elapsed_ms"] = 0
    return report


def _attack_decomposition(sc: Scenario, budget: SearchBudget) -> dict:
    pub = sc.public
    assert isinstance(pub, KoLeePublic)
    t, key_a, key_b = run_kolee(pub, sc.alice, sc.bob)
    if key_a.key_bytes != key_b.key_bytes:
        raise AlgebraicFailure("honest Ko-Lee keys differ")
    out = solve_decomposition_bruteforce(pub.w, t.msg_alice, pub.A, budget)
    solution = recovered = None
    if out.found:
        sol = out.solution
        recovered = kolee_recover_key(t, sol).hex()
        solution = {
            "x_prime": sol.x_prime.to_json(),
            "y_prime": sol.y_prime.to_json(),
            "x_plain": word_json(sol.x_plain),
            "y_plain": word_json(sol.y_plain),
        }
    return {
        "attack": "decomposition",
        "instance": transcript_json(t),
        "solution": solution,
        "recovered_key": recovered,
        "honest_key": key_a.hex(),
        "match": recovered == key_a.hex(),
        "states_explored": out.states_explored,
        "elapsed_ms": out.elapsed_ms,
        "exhausted": out.exhausted,
        "budget": budget.to_json(),
    }


def _attack_aag(sc: Scenario, spec: dict) -> dict:
    """Forge conjugators from given centralizers, or find them by brute-force
    conjugacy search over all Artin generators."""
    pub = sc.public
    assert isinstance(pub, AagPublic)
    ctx = pub.ctx
    x_plain = subgroup_word_eval(pub.a_tuple, sc.alice)
    y_plain = subgroup_word_eval(pub.b_tuple, sc.bob)
    states = 0
    started = time.monotonic()
    if "c_a" in spec or "c_b" in spec:
        c_a = ctx.check(_word(spec.get("c_a", []), "attack.c_a"))
        c_b = ctx.check(_word(spec.get("c_b", []), "attack.c_b"))
        try:
            scen = build_centralizer_scenario(pub, sc.alice, sc.bob, c_a, c_b)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc
        t, honest, x_prime, y_prime = scen.transcript, scen.honest_key, scen.x_prime, scen.y_prime
        exhausted = None
    else:
        t, honest, key_b = run_aag(pub, sc.alice, sc.bob)
        if honest.key_bytes != key_b.key_bytes:
            raise AlgebraicFailure("honest AAG keys differ")
        alphabet = SubgroupSpec(ctx, tuple(ctx.generators()))
        budget = _budget(spec)
        out_x = solve_simultaneous_csp(pub.b_tuple.generators, t.b_conj, alphabet, budget)
        out_y = solve_simultaneous_csp(pub.a_tuple.generators, t.a_conj, alphabet, budget)
        states = out_x.states_explored + out_y.states_explored
        exhausted = out_x.exhausted or out_y.exhausted
        if not (out_x.found and out_y.found):
            return {
                "attack": "csp-aag",
                "instance": transcript_json(t),
                "solution": None,
                "recovered_key": None,
                "honest_key": honest.hex(),
                "match": False,
                "states_explored": states,
                "elapsed_ms": int((time.monotonic() - started) * 1000),
                "exhausted": exhausted,
            }
        x_prime = subgroup_word_eval(alphabet, out_x.solution)
        y_prime = subgroup_word_eval(alphabet, out_y.solution)
        c_b = multiply(x_prime, invert(x_plain))
        c_a = multiply(y_prime, invert(y_plain))
    recovered = aag_adversary_key(t, x_prime, y_prime)
    return {
        "attack": "csp-aag",
        "instance": transcript_json(t),
        "solution": {
            "x_prime": word_json(x_prime),
            "y_prime": word_json(y_prime),
            "c_a": word_json(c_a),
            "c_b": word_json(c_b),
            "verified": {
                "alice": verify_aag_conjugacy(t, x_prime, "alice"),
                "bob": verify_aag_conjugacy(t, y_prime, "bob"),
            },
        },
        "predicted_success": commutes(ctx, c_a, c_b),
        "recovered_key": recovered.hex(),
        "honest_key": honest.hex(),
        "match": recovered.key_bytes == honest.key_bytes,
        "states_explored": states,
        "elapsed_ms": int((time.monotonic() - started) * 1000),
        "exhausted": exhausted,
    }


def generate_scenario(protocol: str, n: int, split: Optional[int], priv_len: int, seed: int, w_len: int = 8) -> dict:
    """A random scenario file; privates are drawn now and written explicitly."""
    if protocol == "kolee":
        pub, a, b = random_kolee_instance(seed, n=n, split=split, w_len=w_len, max_priv_len=priv_len)
        l = len(pub.A) + 1
        return {
            "schema": SCHEMA_VERSION,
            "protocol": "kolee",
            "n": n,
            "seed": seed,
            "public": {"w": word_json(pub.w), "split": l},
            "private": {"alice": a.to_json(), "bob": b.to_json()},
            "attack": {"type": "decomposition", "budget": {"max_depth": 4}},
        }
    if protocol == "aag":
        pub, x, y = random_aag_instance(seed, n=n, max_priv_len=priv_len)
        return {
            "schema": SCHEMA_VERSION,
            "protocol": "aag",
            "n": n,
            "seed": seed,
            "public": {
                "a": {k: v for k, v in pub.a_tuple.to_json().items() if k != "n"},
                "b": {k: v for k, v in pub.b_tuple.to_json().items() if k != "n"},
            },
            "private": {"alice": x.to_json(), "bob": y.to_json()},
            "attack": {"type": "csp-aag", "budget": {"max_depth": 3}},
        }
    raise ScenarioError(f"unknown protocol {protocol!r}")

"""
Every channel transaction validates with its real witness and fails once any
single witness element is dropped or altered.
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from channel_protocol import (  # noqa: E402
    POOL_OUTPUT,
    CommitmentSide,
    build_breach_remedy,
    build_delayed_sweep,
    prepare_recovery,
)
from ledger_sim import OutPoint, ScriptInvalid, Transaction, TxInput, TxOutput  # noqa: E402
from ledger_sim import sign_input, txid  # noqa: E402
from script_engine import Opcode, Script, const, push, templates  # noqa: E402

from conftest import ChannelEnv, load_fixture  # noqa: E402


def funding_spend(env):
    return env.funding_tx, None


def commitment_a(env):
    channel = env.open(60000)
    return channel.device.publishable(1), None


def commitment_b(env):
    channel = env.open(60000)
    return channel.gateway.publishable(1), None


def mutual_close(env):
    channel = env.open(60000)
    channel.update_state(80000)
    return channel.close(relay_fee=True), None


def delayed_sweep(env):
    channel = env.open(60000)
    published = channel.device.publishable(1)
    height = env.confirm(published)
    w = env.params.w
    sweep = build_delayed_sweep(published, env.keys.device.slot("a", 1),
                                env.keys.device.close().public_key, height, height + w, w)
    return sweep, height + w


def device_breach_remedy(env):
    channel = env.open(60000)
    channel.update_state(40000)
    published = channel.device.publishable(1)
    height = env.confirm(published)
    remedy = build_breach_remedy(published, CommitmentSide.A, channel.state(1),
                                 env.keys.gateway.slot("b", 1),
                                 env.keys.gateway.close().public_key,
                                 height, height + 1, env.params.w)
    return remedy, None


def recovery(env):
    channel = env.open(60000)
    channel.update_state(80000)
    published = channel.gateway.publishable(1)
    height = env.confirm(published)
    package = prepare_recovery(env.params, published, channel.state(1), 4, env.keys.device,
                               env.keys.pool, height, height + 1)
    return package.complete(env.keys.watchdog(4).secret_key), None


def pool_claim(env):
    channel = env.open(60000)
    published = channel.device.publishable(1)
    env.confirm(published)
    member = env.keys.publisher(1)
    claim = Transaction(
        inputs=(TxInput(OutPoint(txid(published), POOL_OUTPUT)),),
        outputs=(TxOutput(env.params.sigma1, templates.p2pkh(member.public_key)),),
    )
    signature = sign_input(claim, 0, member.secret_key)
    return claim.with_unlocking(0, templates.multisig_witness([signature])), None


CASES = {
    "funding": funding_spend,
    "commitment_a": commitment_a,
    "commitment_b": commitment_b,
    "mutual_close": mutual_close,
    "delayed_sweep": delayed_sweep,
    "device_breach_remedy": device_breach_remedy,
    "recovery": recovery,
    "pool_claim": pool_claim,
}


def witness_mutations(script):
    """Each single-element removal, plus a one-bit flip of every push and selector."""
    ops = script.ops
    for i, o in enumerate(ops):
        yield f"drop[{i}]", Script(ops[:i] + ops[i + 1:])
        if o.code is Opcode.PUSH:
            flipped = o.data[:-1] + bytes([o.data[-1] ^ 0x01])
            yield f"flip[{i}]", Script(ops[:i] + (push(flipped),) + ops[i + 1:])
        elif o.code is Opcode.CONST:
            yield f"toggle[{i}]", Script(ops[:i] + (const(1 - o.value),) + ops[i + 1:])


def build_case(name):
    env = ChannelEnv(load_fixture("channel.json"))
    tx, height = CASES[name](env)
    return env, tx, height


class TestWitnessMutations:
    """Test script validity under witness mutations."""

    @pytest.mark.parametrize("name", sorted(CASES))
    def test_valid_witness(self, name):
        env, tx, height = build_case(name)
        env.chain.validate(tx, height=height)

    @pytest.mark.parametrize("name", sorted(CASES))
    def test_every_mutation_is_rejected(self, name):
        env, tx, height = build_case(name)
        unlocking = tx.inputs[0].unlocking
        for label, mutated in witness_mutations(unlocking):
            with pytest.raises(ScriptInvalid):
                env.chain.validate(tx.with_unlocking(0, mutated), height=height)
                pytest.fail(f"{name}: {label} still validates")

    def test_suite_size(self):
        total = 0
        for name in CASES:
            _, tx, _ = build_case(name)
            total += sum(1 for _ in witness_mutations(tx.inputs[0].unlocking))
        assert total >= 20

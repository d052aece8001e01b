"""
Locking and unlocking templates for the channel transactions.

Locking scripts:
  - p2pkh                    DUP HASH160 <H(pk)> EQUALVERIFY CHECKSIG
  - multisig                 m <pk>... n CHECKMULTISIG
  - p2sh                     HASH160 <H(redeem)> EQUAL
  - device_to_local          IF W CSV DROP <p2pkh pk_A_j_a>
                             ELSE <p2pkh pk_B_j_b> DROP-chained with <p2pkh pk_A_j_c> ENDIF
  - gateway_to_local         IF W CSV DROP <p2pkh pk_B_j_a>
                             ELSE 1-of-K2 watchdogs DROP, <p2pkh pk_B_j_c> DROP, <p2pkh pk_A_j_b> ENDIF

Unlocking scripts are built from the witness items in push order.
"""

from typing import Sequence

from crypto_keys.hashing import hash160

from .opcodes import Opcode
from .script import Script, const, number, op, push, serialize_script


def p2pkh_ops(pubkey: bytes):
    return (
        op(Opcode.DUP), op(Opcode.HASH160), push(hash160(pubkey)),
        op(Opcode.EQUALVERIFY), op(Opcode.CHECKSIG),
    )


def p2pkh(pubkey: bytes) -> Script:
    """Pay to public key hash."""
    return Script.of(*p2pkh_ops(pubkey))


def multisig(m: int, pubkeys: Sequence[bytes]) -> Script:
    """Bare m-of-n multisig."""
    return Script.of(const(m), *(push(pk) for pk in pubkeys), const(len(pubkeys)),
                     op(Opcode.CHECKMULTISIG))


def p2sh(redeem_script: Script) -> Script:
    """Pay to the hash of a redeem script."""
    return Script.of(op(Opcode.HASH160), push(hash160(serialize_script(redeem_script))),
                     op(Opcode.EQUAL))


def funding_redeem_script(pk_a_ft: bytes, pk_b_ft: bytes) -> Script:
    """2-of-2 between the two funding keys."""
    return multisig(2, [pk_a_ft, pk_b_ft])


def device_to_local(w: int, pk_a_a: bytes, pk_b_b: bytes, pk_a_c: bytes) -> Script:
    """Device output of the commitment the device publishes."""
    return Script.of(
        op(Opcode.IF),
        number(w), op(Opcode.CHECKSEQUENCEVERIFY), op(Opcode.DROP),
        *p2pkh_ops(pk_a_a),
        op(Opcode.ELSE),
        *p2pkh_ops(pk_b_b), op(Opcode.DROP),
        *p2pkh_ops(pk_a_c),
        op(Opcode.ENDIF),
    )


def gateway_to_local(w: int, pk_b_a: bytes, watchdog_keys: Sequence[bytes],
                     pk_b_c: bytes, pk_a_b: bytes) -> Script:
    """Gateway output of the commitment the gateway publishes."""
    return Script.of(
        op(Opcode.IF),
        number(w), op(Opcode.CHECKSEQUENCEVERIFY), op(Opcode.DROP),
        *p2pkh_ops(pk_b_a),
        op(Opcode.ELSE),
        const(1), *(push(pk) for pk in watchdog_keys), const(len(watchdog_keys)),
        op(Opcode.CHECKMULTISIG), op(Opcode.DROP),
        *p2pkh_ops(pk_b_c), op(Opcode.DROP),
        *p2pkh_ops(pk_a_b),
        op(Opcode.ENDIF),
    )


def p2pkh_witness(sig: bytes, pubkey: bytes) -> Script:
    return Script.of(push(sig), push(pubkey))


def multisig_witness(sigs: Sequence[bytes]) -> Script:
    return Script.of(*(push(s) for s in sigs))


def p2sh_multisig_witness(sigs: Sequence[bytes], redeem_script: Script) -> Script:
    """Signatures in key order, then the serialized redeem script."""
    return Script.of(*(push(s) for s in sigs), push(serialize_script(redeem_script)))


def timelocked_witness(sig: bytes, pubkey: bytes) -> Script:
    """IF branch of a revocable output: owner spends after W blocks."""
    return Script.of(push(sig), push(pubkey), const(1))


def device_revocation_witness(sig_b_b: bytes, pk_b_b: bytes,
                              sig_a_c: bytes, pk_a_c: bytes) -> Script:
    """ELSE branch of device_to_local; the pk_B_j_b check runs first."""
    return Script.of(push(sig_a_c), push(pk_a_c), push(sig_b_b), push(pk_b_b), const(0))


def gateway_revocation_witness(sig_a_b: bytes, pk_a_b: bytes, sig_b_c: bytes, pk_b_c: bytes,
                               watchdog_sig: bytes) -> Script:
    """ELSE branch of gateway_to_local; watchdog signature is checked first."""
    return Script.of(
        push(sig_a_b), push(pk_a_b), push(sig_b_c), push(pk_b_c), push(watchdog_sig), const(0),
    )

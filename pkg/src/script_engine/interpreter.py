"""
Stack machine for the script subset.

The unlocking script runs first, then the locking script on the same stack.
A locking script of the form `HASH160 <20 bytes> EQUAL` is pay-to-script-hash:
after it succeeds, the last unlocking push is parsed as the redeem script and
run on the remaining stack.

Two deliberate departures from Bitcoin:
  - CHECKMULTISIG pops exactly n, the keys, m and the signatures (no dummy).
  - `CHECKSIG DROP` / `CHECKMULTISIG DROP` fail fast when the check is false,
    so chained key checks in the commitment scripts all have to pass.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from crypto_keys.hashing import hash160
from crypto_keys.signatures import DEFAULT_SCHEME, SignatureScheme

from .errors import InvalidContext, ScriptError, StackUnderflow, VerifyFailed
from .opcodes import MAX_MULTISIG_KEYS, Opcode
from .script import Script, decode_num, deserialize_script

MAX_STACK_DEPTH = 1_000

TRUE = b"\x01"
FALSE = b""


@dataclass(frozen=True)
class ExecContext:
    """What an input's scripts are checked against."""
    signing_digest: bytes
    input_confirmation_height: int = 0
    current_height: int = 0
    input_sequence: int = 0

    def __post_init__(self):
        if self.current_height < self.input_confirmation_height:
            raise InvalidContext(
                f"current height {self.current_height} below confirmation "
                f"height {self.input_confirmation_height}"
            )

    @property
    def age(self) -> int:
        return self.current_height - self.input_confirmation_height


@dataclass(frozen=True)
class ExecResult:
    """Outcome of a run, with the failure kept for diagnostics."""
    ok: bool
    error: Optional[ScriptError] = None

    @property
    def reason(self) -> str:
        if self.ok:
            return "ok"
        if self.error is None:
            return "false on top of stack"
        return f"{type(self.error).__name__}: {self.error}"


def cast_to_bool(element: bytes) -> bool:
    for i, byte in enumerate(element):
        if byte != 0:
            # negative zero
            if i == len(element) - 1 and byte == 0x80:
                return False
            return True
    return False


def is_p2sh(locking: Script) -> bool:
    ops = locking.ops
    return (
        len(ops) == 3
        and ops[0].code is Opcode.HASH160
        and ops[1].code is Opcode.PUSH
        and len(ops[1].data) == 20
        and ops[2].code is Opcode.EQUAL
    )


class _Machine:
    """Single evaluation of one script over a shared stack."""

    def __init__(self, stack: List[bytes], ctx: ExecContext, scheme: SignatureScheme,
                 max_depth: int):
        self.stack = stack
        self.ctx = ctx
        self.scheme = scheme
        self.max_depth = max_depth
        self._dispatch = self._handlers()

    def pop(self) -> bytes:
        if not self.stack:
            raise StackUnderflow("pop from empty stack")
        return self.stack.pop()

    def push(self, element: bytes) -> None:
        self.stack.append(element)
        if len(self.stack) > self.max_depth:
            raise ScriptError(f"stack depth above {self.max_depth}")

    def run(self, script: Script) -> None:
        ops = script.ops
        executing: List[bool] = []

        for i, o in enumerate(ops):
            active = all(executing)

            if o.code is Opcode.IF:
                taken = cast_to_bool(self.pop()) if active else False
                executing.append(taken)
                continue
            if o.code is Opcode.ELSE:
                executing[-1] = not executing[-1]
                continue
            if o.code is Opcode.ENDIF:
                executing.pop()
                continue
            if not active:
                continue

            fail_fast = i + 1 < len(ops) and ops[i + 1].code is Opcode.DROP
            self._step(o, fail_fast)

    def _step(self, o, fail_fast: bool) -> None:
        self._dispatch[o.code](o, fail_fast)

    def _handlers(self) -> Dict[Opcode, Callable]:
        return {
            Opcode.PUSH: lambda o, _: self.push(o.data),
            Opcode.CONST: lambda o, _: self.push(b"" if o.value == 0 else bytes([o.value])),
            Opcode.DUP: self._dup,
            Opcode.DROP: lambda o, _: self.pop(),
            Opcode.HASH160: lambda o, _: self.push(hash160(self.pop())),
            Opcode.EQUAL: self._equal,
            Opcode.EQUALVERIFY: self._equalverify,
            Opcode.CHECKSIG: self._checksig,
            Opcode.CHECKMULTISIG: self._checkmultisig,
            Opcode.CHECKSEQUENCEVERIFY: self._checksequenceverify,
        }

    def _dup(self, o, _):
        if not self.stack:
            raise StackUnderflow("DUP on empty stack")
        self.push(self.stack[-1])

    def _equal(self, o, _):
        a, b = self.pop(), self.pop()
        self.push(TRUE if a == b else FALSE)

    def _equalverify(self, o, _):
        a, b = self.pop(), self.pop()
        if a != b:
            raise VerifyFailed("EQUALVERIFY mismatch")

    def _checksig(self, o, fail_fast: bool):
        pubkey = self.pop()
        sig = self.pop()
        ok = self.scheme.verify(pubkey, self.ctx.signing_digest, sig)
        if fail_fast and not ok:
            raise VerifyFailed("CHECKSIG failed")
        self.push(TRUE if ok else FALSE)

    def _checkmultisig(self, o, fail_fast: bool):
        n = decode_num(self.pop())
        if not 1 <= n <= MAX_MULTISIG_KEYS:
            raise ScriptError(f"multisig key count {n} out of range")
        keys = [self.pop() for _ in range(n)][::-1]
        m = decode_num(self.pop())
        if not 1 <= m <= n:
            raise ScriptError(f"multisig signature count {m} out of range")
        sigs = [self.pop() for _ in range(m)][::-1]

        # signatures must match keys in listed order
        remaining = iter(keys)
        ok = all(
            any(self.scheme.verify(key, self.ctx.signing_digest, sig) for key in remaining)
            for sig in sigs
        )
        if fail_fast and not ok:
            raise VerifyFailed("CHECKMULTISIG failed")
        self.push(TRUE if ok else FALSE)

    def _checksequenceverify(self, o, _):
        if not self.stack:
            raise StackUnderflow("CHECKSEQUENCEVERIFY on empty stack")
        delay = decode_num(self.stack[-1])
        if delay < 0:
            raise ScriptError("negative relative locktime")
        if self.ctx.input_sequence < delay:
            raise VerifyFailed(f"input sequence {self.ctx.input_sequence} below {delay}")
        if self.ctx.age < delay:
            raise VerifyFailed(f"output is {self.ctx.age} blocks old, needs {delay}")


def _run_pair(unlocking: Script, locking: Script, ctx: ExecContext,
              scheme: SignatureScheme, max_depth: int) -> bool:
    stack: List[bytes] = []
    _Machine(stack, ctx, scheme, max_depth).run(unlocking)
    redeem_stack = list(stack)

    _Machine(stack, ctx, scheme, max_depth).run(locking)
    if not stack or not cast_to_bool(stack[-1]):
        return False

    if is_p2sh(locking):
        if not unlocking.is_push_only() or not redeem_stack:
            raise ScriptError("pay-to-script-hash spend needs a push-only unlocking script")
        redeem = deserialize_script(redeem_stack.pop())
        _Machine(redeem_stack, ctx, scheme, max_depth).run(redeem)
        return bool(redeem_stack) and cast_to_bool(redeem_stack[-1])

    return True


def execute_verbose(unlocking: Script, locking: Script, ctx: ExecContext,
                    scheme: SignatureScheme = DEFAULT_SCHEME,
                    max_depth: int = MAX_STACK_DEPTH) -> ExecResult:
    """Run both scripts; keep the failure reason."""
    try:
        return ExecResult(ok=_run_pair(unlocking, locking, ctx, scheme, max_depth))
    except ScriptError as e:
        return ExecResult(ok=False, error=e)


def execute(unlocking: Script, locking: Script, ctx: ExecContext,
            scheme: SignatureScheme = DEFAULT_SCHEME,
            max_depth: int = MAX_STACK_DEPTH) -> bool:
    """True iff the spend is valid under ctx."""
    return execute_verbose(unlocking, locking, ctx, scheme, max_depth).ok

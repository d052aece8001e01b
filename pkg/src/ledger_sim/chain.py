"""
Deterministic single-chain ledger.

Time is block height. Transactions enter the mempool through `submit` and are
confirmed by `mine_block` in FIFO order; anything that no longer validates at
the new height is dropped with a diagnostic. There are no forks, so a
confirmed transaction is never removed.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from common.logging_setup import build_logger
from crypto_keys.signatures import DEFAULT_SCHEME, SignatureScheme
from script_engine import ExecContext, Script, execute_verbose
from script_engine.interpreter import MAX_STACK_DEPTH

from .errors import (
    DoubleSpend,
    MalformedTransaction,
    MissingUtxo,
    NegativeFee,
    ScriptInvalid,
    ValidationError,
    ValueOverflow,
)
from .transaction import MAX_VALUE, OutPoint, Transaction, TxOutput, signing_digest, txid

BLOCK_INTERVAL_MINUTES = 10
SAFE_CONFIRMATION_DEPTH = 6


@dataclass(frozen=True)
class UtxoEntry:
    output: TxOutput
    confirmation_height: int


@dataclass
class Block:
    height: int
    txids: List[bytes] = field(default_factory=list)
    fees: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "height": self.height,
            "txids": [t.hex() for t in self.txids],
            "fees": self.fees,
        }


@dataclass
class ConfirmedTx:
    tx: Transaction
    height: int
    fee: int
    contexts: List[ExecContext]


@dataclass
class DroppedTx:
    txid: bytes
    height: int
    reason: str

    def to_dict(self) -> Dict[str, Any]:
        return {"txid": self.txid.hex(), "height": self.height, "reason": self.reason}


class _View:
    """Overlay of pending changes over the confirmed UTXO set."""

    def __init__(self, chain: "Chain"):
        self.chain = chain
        self.added: Dict[OutPoint, UtxoEntry] = {}
        self.spent: Dict[OutPoint, bytes] = {}

    def lookup(self, outpoint: OutPoint) -> Optional[UtxoEntry]:
        if outpoint in self.spent:
            return None
        if outpoint in self.added:
            return self.added[outpoint]
        return self.chain.utxo.get(outpoint)

    def is_spent(self, outpoint: OutPoint) -> bool:
        return outpoint in self.spent or outpoint in self.chain.spends

    def apply(self, tx: Transaction, height: int) -> None:
        tx_id = txid(tx)
        for i in tx.inputs:
            self.spent[i.previous] = tx_id
        for index, output in enumerate(tx.outputs):
            self.added[OutPoint(tx_id, index)] = UtxoEntry(output, height)


class Chain:
    """Blocks, UTXO set and mempool of the simulated ledger."""

    def __init__(self, scheme: SignatureScheme = DEFAULT_SCHEME,
                 max_stack_depth: int = MAX_STACK_DEPTH):
        self.scheme = scheme
        self.max_stack_depth = max_stack_depth
        self.logger = self._setup_logging()

        self.height = 0
        self.blocks: List[Block] = [Block(height=0)]
        self.utxo: Dict[OutPoint, UtxoEntry] = {}
        self.mempool: List[Transaction] = []
        self.transactions: Dict[bytes, ConfirmedTx] = {}
        self.spends: Dict[OutPoint, Tuple[bytes, int]] = {}
        self.dropped: List[DroppedTx] = []
        self.seeded_value = 0
        self.total_fees = 0
        self._seed_counter = 0

    def _setup_logging(self):
        """Setup logging for the chain."""
        return build_logger("ledger")

    # -- validation ------------------------------------------------------

    def _check(self, tx: Transaction, view: _View, height: int) -> Tuple[int, List[ExecContext]]:
        for output in tx.outputs:
            if not 0 <= output.value <= MAX_VALUE:
                raise ValueOverflow(f"output value {output.value}")
        total_out = tx.total_out()
        if total_out > MAX_VALUE:
            raise ValueOverflow("sum of outputs overflows")

        if tx.coinbase:
            if tx.inputs:
                raise MalformedTransaction("coinbase transaction with inputs")
            return 0, []
        if not tx.inputs or not tx.outputs:
            raise MalformedTransaction("transaction needs inputs and outputs")

        seen = set()
        total_in = 0
        contexts: List[ExecContext] = []
        for index, txin in enumerate(tx.inputs):
            if txin.previous in seen:
                raise DoubleSpend(f"{txin.previous} spent twice in one transaction")
            seen.add(txin.previous)

            entry = view.lookup(txin.previous)
            if entry is None:
                if view.is_spent(txin.previous):
                    raise DoubleSpend(f"{txin.previous} already spent")
                raise MissingUtxo(f"{txin.previous} not found")

            ctx = ExecContext(
                signing_digest=signing_digest(tx, index),
                input_confirmation_height=entry.confirmation_height,
                current_height=height,
                input_sequence=txin.sequence,
            )
            result = execute_verbose(txin.unlocking, entry.output.locking, ctx,
                                     self.scheme, self.max_stack_depth)
            if not result.ok:
                raise ScriptInvalid(index, result.reason)
            contexts.append(ctx)
            total_in += entry.output.value

        if total_in > MAX_VALUE:
            raise ValueOverflow("sum of inputs overflows")
        fee = total_in - total_out
        if fee < 0:
            raise NegativeFee(f"outputs exceed inputs by {-fee}")
        return fee, contexts

    def _mempool_view(self, height: int) -> _View:
        view = _View(self)
        for pending in self.mempool:
            view.apply(pending, height)
        return view

    def validate(self, tx: Transaction, height: Optional[int] = None) -> int:
        """
        Check tx against the chain plus the pending mempool, as if mined at
        `height` (default: the next block). Returns the implicit miner fee.
        Never mutates the chain.
        """
        at = self.height + 1 if height is None else height
        fee, _ = self._check(tx, self._mempool_view(at), at)
        return fee

    # -- mutation --------------------------------------------------------

    def submit(self, tx: Transaction) -> bytes:
        """Validate and append to the mempool."""
        self.validate(tx)
        self.mempool.append(tx)
        tx_id = txid(tx)
        self.logger.debug(f"mempool += {tx_id.hex()[:16]}")
        return tx_id

    def seed(self, value: int, locking: Script) -> OutPoint:
        """Queue an exogenous coinbase output; confirmed by the next block."""
        self._seed_counter += 1
        tx = Transaction(inputs=(), outputs=(TxOutput(value, locking),), coinbase=True,
                         locktime=self._seed_counter)
        self.submit(tx)
        return OutPoint(txid(tx), 0)

    def mine_block(self) -> Block:
        """Confirm every mempool transaction still valid at the new height."""
        new_height = self.height + 1
        view = _View(self)
        block = Block(height=new_height)
        confirmed: List[ConfirmedTx] = []

        for tx in self.mempool:
            tx_id = txid(tx)
            try:
                fee, contexts = self._check(tx, view, new_height)
            except ValidationError as e:
                self.dropped.append(DroppedTx(tx_id, new_height, f"{type(e).__name__}: {e}"))
                self.logger.warning(f"dropped {tx_id.hex()[:16]} at height {new_height}: {e}")
                continue
            view.apply(tx, new_height)
            confirmed.append(ConfirmedTx(tx, new_height, fee, contexts))
            block.txids.append(tx_id)
            block.fees += fee

        for outpoint, spender in view.spent.items():
            self.utxo.pop(outpoint, None)
            self.spends[outpoint] = (spender, new_height)
        self.utxo.update(view.added)
        for record in confirmed:
            self.transactions[txid(record.tx)] = record
            if record.tx.coinbase:
                self.seeded_value += record.tx.total_out()

        self.total_fees += block.fees
        self.mempool = []
        self.blocks.append(block)
        self.height = new_height
        self.logger.debug(f"mined block {new_height} with {len(block.txids)} tx(s)")
        return block

    def mine_blocks(self, count: int) -> List[Block]:
        return [self.mine_block() for _ in range(count)]

    # -- queries ---------------------------------------------------------

    def scan_for_spend(self, outpoint: OutPoint) -> Optional[Tuple[bytes, int]]:
        """Confirmed transaction spending the outpoint, with its height."""
        return self.spends.get(outpoint)

    def get_transaction(self, tx_id: bytes) -> Optional[Transaction]:
        record = self.transactions.get(tx_id)
        return record.tx if record else None

    def confirmation_height(self, tx_id: bytes) -> Optional[int]:
        record = self.transactions.get(tx_id)
        return record.height if record else None

    def confirmation_depth(self, tx_id: bytes) -> int:
        """Blocks on top of and including the one confirming tx_id (0 if unconfirmed)."""
        height = self.confirmation_height(tx_id)
        return 0 if height is None else self.height - height + 1

    def is_safe(self, tx_id: bytes, depth: int = SAFE_CONFIRMATION_DEPTH) -> bool:
        return self.confirmation_depth(tx_id) >= depth

    def reverify(self, tx_id: bytes) -> bool:
        """Re-run every input of a confirmed tx with its recorded context."""
        record = self.transactions[tx_id]
        for txin, ctx in zip(record.tx.inputs, record.contexts):
            previous = self.transactions[txin.previous.txid].tx.outputs[txin.previous.output_index]
            if not execute_verbose(txin.unlocking, previous.locking, ctx, self.scheme,
                                   self.max_stack_depth).ok:
                return False
        return True

    def utxo_value(self) -> int:
        return sum(entry.output.value for entry in self.utxo.values())

    def check_conservation(self) -> bool:
        """UTXO value plus cumulative fees equals everything ever seeded."""
        return self.utxo_value() + self.total_fees == self.seeded_value

    def confirmed_order(self) -> List[bytes]:
        """Confirmed txids in block order."""
        return [t for block in self.blocks for t in block.txids]

    def to_report(self) -> Dict[str, Any]:
        """JSON-ready dump of blocks, UTXO set and per-tx fees."""
        utxo = sorted(
            (
                {
                    "txid": op.txid.hex(),
                    "index": op.output_index,
                    "value": entry.output.value,
                    "height": entry.confirmation_height,
                    "locking": entry.output.locking.to_text(),
                }
                for op, entry in self.utxo.items()
            ),
            key=lambda e: (e["height"], e["txid"], e["index"]),
        )
        return {
            "height": self.height,
            "blocks": [b.to_dict() for b in self.blocks],
            "utxo": utxo,
            "transactions": [
                {
                    "txid": t.hex(),
                    "height": self.transactions[t].height,
                    "fee": self.transactions[t].fee,
                    "coinbase": self.transactions[t].tx.coinbase,
                }
                for t in self.confirmed_order()
            ],
            "dropped": [d.to_dict() for d in self.dropped],
            "seeded_value": self.seeded_value,
            "total_fees": self.total_fees,
        }

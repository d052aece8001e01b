"""Public keys each party needs for the transactions of one channel state."""

from dataclasses import dataclass
from typing import Optional, Tuple

from crypto_keys import DEFAULT_SCHEME, Keypair, KeyChain, Party, SignatureScheme, sha256

from .errors import BadMemberIndex, StateExhausted
from .params import ChannelParams

POOL_SEED_TAG = b"iotchan/pool"


def default_pool_seed(master_seed_a: bytes, master_seed_b: bytes) -> bytes:
    return sha256(POOL_SEED_TAG + master_seed_a + master_seed_b)


@dataclass(frozen=True)
class PoolKeys:
    """Members of the publisher (K1) and watchdog (K2) pools, in index order."""
    publishers: Tuple[bytes, ...]
    watchdogs: Tuple[bytes, ...]


@dataclass(frozen=True)
class StateKeys:
    """Slot a/b/c public keys of both parties for state j, and the device recovery key."""
    index: int
    a_a: bytes
    a_b: bytes
    a_c: bytes
    b_a: bytes
    b_b: bytes
    b_c: bytes
    a_rc: bytes
    pool: PoolKeys


class ChannelKeys:
    """
    Key material of one channel: the two parties' keychains and the pool
    members' keychains. Actors only ever read the public halves of the
    keychains they do not own.
    """

    def __init__(self, params: ChannelParams, master_seed_a: bytes, master_seed_b: bytes,
                 pool_seed: Optional[bytes] = None, scheme: SignatureScheme = DEFAULT_SCHEME):
        self.params = params
        self.device = KeyChain(master_seed_a, Party.A, scheme)
        self.gateway = KeyChain(master_seed_b, Party.B, scheme)
        pool_seed = pool_seed or default_pool_seed(self.device.master_seed, self.gateway.master_seed)
        self.publisher_chain = KeyChain(pool_seed, Party.THIRD_PARTY_PUB, scheme)
        self.watchdog_chain = KeyChain(pool_seed, Party.THIRD_PARTY_WATCH, scheme)
        self.pool = PoolKeys(
            publishers=tuple(self.publisher_chain.pool_member(i).public_key for i in range(params.k1)),
            watchdogs=tuple(self.watchdog_chain.pool_member(i).public_key for i in range(params.k2)),
        )

    def publisher(self, member_index: int) -> Keypair:
        if not 0 <= member_index < self.params.k1:
            raise BadMemberIndex(f"publisher {member_index} outside 0..{self.params.k1 - 1}")
        return self.publisher_chain.pool_member(member_index)

    def watchdog(self, member_index: int) -> Keypair:
        if not 0 <= member_index < self.params.k2:
            raise BadMemberIndex(f"watchdog {member_index} outside 0..{self.params.k2 - 1}")
        return self.watchdog_chain.pool_member(member_index)

    def for_party(self, party: Party) -> KeyChain:
        return self.device if party is Party.A else self.gateway

    def state(self, index: int) -> StateKeys:
        if not 1 <= index <= self.params.max_states:
            raise StateExhausted(f"state {index} outside 1..{self.params.max_states}")
        a_a, a_b, a_c = self.device.state_keys(index)
        b_a, b_b, b_c = self.gateway.state_keys(index)
        return StateKeys(
            index=index,
            a_a=a_a.public_key,
            a_b=a_b.public_key,
            a_c=a_c.public_key,
            b_a=b_a.public_key,
            b_b=b_b.public_key,
            b_c=b_c.public_key,
            a_rc=self.device.recovery(index).public_key,
            pool=self.pool,
        )

"""
Tests for hashing, signatures and key derivation.
"""

import random
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from crypto_keys import (  # noqa: E402
    DEFAULT_SCHEME,
    DeviceKeyStore,
    InvalidKeyPath,
    InvalidSeed,
    KeyChain,
    KeyPath,
    KeyRole,
    Party,
    Secp256k1Scheme,
    SignatureScheme,
    derive_keypair,
    encode_path,
    hash160,
    parse_seed,
    public_key_for,
    sha256d,
    sign,
    verify,
)

SEED = bytes(range(32))
ZERO_SEED_FUNDING_KEY = "0315e2f223e37925e48c2845b780f3cdf0d5cd4466ac2db94360e604e0a04c6284"


class TestHashing:
    """Test the hash primitives."""

    def test_sha256d_of_empty_input(self):
        """Double SHA-256 matches the well-known empty-string value."""
        assert sha256d(b"").hex() == (
            "5df6e0e2761359d30a8275058e299fcc0381534545f55cf43e41983f5d4c9456"
        )

    def test_hash160_length(self):
        assert len(hash160(b"\x02" * 33)) == 20

    @pytest.mark.parametrize("data, expected", [
        (b"", "b472a266d0bd89c13706a4132ccfb16f7c3b9fcb"),
        (b"abc", "bb1be98c142444d7a56aa3981c3942a978e4dc33"),
    ])
    def test_hash160_known_vectors(self, data, expected):
        """RIPEMD160(SHA256(x)) matches independently computed digests."""
        assert hash160(data).hex() == expected


class TestSignatures:
    """Test the default signature scheme."""

    def test_sign_and_verify(self):
        keypair = derive_keypair(SEED, KeyPath(Party.A, KeyRole.FUNDING))
        digest = sha256d(b"message")
        signature = sign(keypair.secret_key, digest)
        assert len(keypair.public_key) == 33
        assert verify(keypair.public_key, digest, signature)

    def test_signatures_are_deterministic(self):
        keypair = derive_keypair(SEED, KeyPath(Party.A, KeyRole.CLOSE))
        digest = sha256d(b"message")
        assert sign(keypair.secret_key, digest) == sign(keypair.secret_key, digest)

    def test_wrong_message_or_key_fails(self):
        a = derive_keypair(SEED, KeyPath(Party.A, KeyRole.FUNDING))
        b = derive_keypair(SEED, KeyPath(Party.B, KeyRole.FUNDING))
        digest = sha256d(b"message")
        signature = sign(a.secret_key, digest)
        assert not verify(a.public_key, sha256d(b"other"), signature)
        assert not verify(b.public_key, digest, signature)

    def test_garbage_inputs_do_not_raise(self):
        """Malformed keys and signatures verify as False."""
        digest = sha256d(b"message")
        assert not DEFAULT_SCHEME.verify(b"\x00" * 33, digest, b"\x01" * 64)
        keypair = derive_keypair(SEED, KeyPath(Party.A, KeyRole.FUNDING))
        assert not verify(keypair.public_key, digest, b"short")

    @pytest.mark.parametrize("case", range(24))
    def test_sign_verify_over_random_keys(self, case):
        """Signatures verify for their own key and message only."""
        rng = random.Random(case)
        seed = bytes(rng.getrandbits(8) for _ in range(32))
        role = rng.choice(list(KeyRole))
        state_index = 0 if role in (KeyRole.FUNDING, KeyRole.CLOSE) else rng.randint(1, 5000)
        path = KeyPath(rng.choice(list(Party)), role, state_index, rng.randint(0, 20))
        keypair = derive_keypair(seed, path)
        other = derive_keypair(bytes(rng.getrandbits(8) for _ in range(32)), path)

        message = sha256d(bytes(rng.getrandbits(8) for _ in range(rng.randint(0, 64))))
        signature = sign(keypair.secret_key, message)
        assert verify(keypair.public_key, message, signature)
        assert not verify(other.public_key, message, signature)

        bit = rng.randrange(256)
        flipped = bytearray(message)
        flipped[bit // 8] ^= 1 << (bit % 8)
        assert not verify(keypair.public_key, bytes(flipped), signature)

    def test_scheme_interface(self):
        """The default scheme implements the abstract interface."""
        with pytest.raises(TypeError):
            SignatureScheme()
        assert isinstance(DEFAULT_SCHEME, Secp256k1Scheme)
        keypair = derive_keypair(SEED, KeyPath(Party.B, KeyRole.CLOSE))
        assert public_key_for(keypair.secret_key) == keypair.public_key
        assert DEFAULT_SCHEME.public_key(keypair.secret_key) == keypair.public_key
        assert Secp256k1Scheme.is_valid_secret(keypair.secret_key)
        assert not Secp256k1Scheme.is_valid_secret(b"\x00" * 32)


class TestKeyDerivation:
    """Test deterministic hierarchical derivation."""

    def test_path_encoding_is_eight_bytes_little_endian(self):
        path = KeyPath(Party.B, KeyRole.STATE_C, state_index=258, member_index=3)
        assert encode_path(path) == bytes([1, 4, 2, 1, 0, 0, 3, 0])

    def test_zero_seed_funding_key(self):
        """Derivation output is pinned for the all-zero seed."""
        keypair = derive_keypair(bytes(32), KeyPath(Party.A, KeyRole.FUNDING))
        assert keypair.secret_key.hex() == (
            "2c34ce1df23b838c5abf2a7f6437cca3d3067ed509ff25f11df6b11b582b51eb"
        )
        assert keypair.public_key.hex() == ZERO_SEED_FUNDING_KEY

    def test_derivation_is_pure(self):
        path = KeyPath(Party.A, KeyRole.STATE_A, state_index=7)
        assert derive_keypair(SEED, path) == derive_keypair(SEED, path)

    def test_distinct_paths_give_distinct_keys(self):
        keys = {
            derive_keypair(SEED, KeyPath(Party.A, role, 1 if role.name.startswith("STATE") else 0))
            .public_key
            for role in KeyRole
        }
        assert len(keys) == len(KeyRole)

    def test_state_roles_need_positive_index(self):
        with pytest.raises(InvalidKeyPath):
            KeyPath(Party.A, KeyRole.STATE_B, state_index=0)

    def test_fixed_roles_reject_state_index(self):
        with pytest.raises(InvalidKeyPath):
            KeyPath(Party.A, KeyRole.FUNDING, state_index=1)

    def test_keychain_caches_and_matches_direct_derivation(self):
        chain = KeyChain(SEED, Party.A)
        a, b, c = chain.state_keys(2)
        assert a == derive_keypair(SEED, KeyPath(Party.A, KeyRole.STATE_A, 2))
        assert chain.slot("c", 2) is c
        assert len({a.public_key, b.public_key, c.public_key}) == 3


class TestSeeds:
    """Test seed parsing and the device key store."""

    def test_parse_seed_accepts_hex_and_bytes(self):
        assert parse_seed("00" * 32) == bytes(32)
        assert parse_seed(bytes(32)) == bytes(32)

    @pytest.mark.parametrize("seed", ["00" * 31, "zz" * 32, 12345, b"\x00" * 33])
    def test_parse_seed_rejects_bad_input(self, seed):
        with pytest.raises(InvalidSeed):
            parse_seed(seed)

    def test_key_store_persists_only_seed_index_and_balances(self):
        store = DeviceKeyStore(SEED, state_index=4, balance_a=70000, balance_b=30000)
        restored = DeviceKeyStore.from_json(store.to_json())
        assert restored == store
        assert set(store.to_dict()) == {"master_seed", "state_index", "balance_a", "balance_b"}
        assert restored.keychain().state_keys(4) == KeyChain(SEED, Party.A).state_keys(4)

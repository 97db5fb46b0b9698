"""Ephemeral blind-relay rooms for coordinating Bitcoin multisig PSBT signing.

The relay never holds decryption keys, plaintext transaction data, or
persistent state; all cryptography happens client-side, and the coordinator
leaves with a deterministic audit receipt anchored to the final TXID.
"""

__version__ = "0.1.0"

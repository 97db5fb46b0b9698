"""BIP-174 PSBT engine: parse/serialize, combine, progress, finalize, txid."""

from .multisig import (
    FinalTx,
    InputProgress,
    InvalidSignature,
    NoScript,
    NonMultisigScript,
    QuorumNotMet,
    SignatureProgress,
    UnsupportedScriptType,
    finalize,
    finalize_psbt_fields,
    parse_multisig_script,
    progress,
    sighash_segwit_v0,
    verify_signature,
)
from .psbt import (
    BadMagic,
    ConflictingValues,
    DifferentUnsignedTx,
    DuplicateKey,
    InvalidStructure,
    Psbt,
    PsbtError,
    SignedTxInGlobal,
    combine,
    input_non_witness_utxo,
    input_partial_sigs,
    input_redeem_script,
    input_sighash_type,
    input_witness_script,
    input_witness_utxo,
    parse_psbt,
)
from .tx import (
    MalformedTx,
    MalformedVarint,
    OutPoint,
    SerializationError,
    Transaction,
    Truncated,
    TxIn,
    TxOut,
    compute_txid,
    sha256d,
)

__all__ = [
    "BadMagic",
    "ConflictingValues",
    "DifferentUnsignedTx",
    "DuplicateKey",
    "FinalTx",
    "InputProgress",
    "InvalidSignature",
    "InvalidStructure",
    "MalformedTx",
    "MalformedVarint",
    "NoScript",
    "NonMultisigScript",
    "OutPoint",
    "Psbt",
    "PsbtError",
    "QuorumNotMet",
    "SerializationError",
    "SignatureProgress",
    "SignedTxInGlobal",
    "Transaction",
    "Truncated",
    "TxIn",
    "TxOut",
    "UnsupportedScriptType",
    "combine",
    "compute_txid",
    "finalize",
    "finalize_psbt_fields",
    "input_non_witness_utxo",
    "input_partial_sigs",
    "input_redeem_script",
    "input_sighash_type",
    "input_witness_script",
    "input_witness_utxo",
    "parse_multisig_script",
    "parse_psbt",
    "progress",
    "sha256d",
    "sighash_segwit_v0",
    "verify_signature",
]

"""Transferable e-cash: blind signatures, coin ledger, wallets and a network simulator."""

from ._core import (
    DlpGroup,
    KeyPair,
    PrivateKey,
    PublicKey,
    TcashError,
    audit,
    blind,
    gen_dlp_group,
    is_probable_prime,
    is_valid_group,
    keygen,
    keypair_from_factors,
    mod_exp,
    mod_inverse,
    run_scenario,
    sha256,
    sign,
    unblind,
    verify,
    verify_dlp,
)

__all__ = [
    "DlpGroup",
    "KeyPair",
    "PrivateKey",
    "PublicKey",
    "TcashError",
    "audit",
    "blind",
    "gen_dlp_group",
    "is_probable_prime",
    "is_valid_group",
    "keygen",
    "keypair_from_factors",
    "mod_exp",
    "mod_inverse",
    "run_scenario",
    "sha256",
    "sign",
    "unblind",
    "verify",
    "verify_dlp",
]

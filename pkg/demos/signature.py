"""Sign and verify at the default parameters, and look at the sizes.

The public key and secret key files hold seeds, so they stay small; the
signature carries t commitment and response columns.
"""

from compact_knapsack.sigma import DEFAULT_PARAMS, keygen
from compact_knapsack.signature import (
    SIG_VERSION_CANONICAL,
    decode_signature,
    encode_public_key,
    encode_secret_key,
    encode_signature,
    expected_signature_size,
    sign_with_restarts,
    verify_signature,
)


def main():
    pk, sk = keygen(DEFAULT_PARAMS, b"signature demo")
    msg = b"pay 10 coins to bob"
    sig, restarts = sign_with_restarts(sk, pk, msg)
    blob = encode_signature(sig)
    print(f"signed after {restarts} restarts")
    print(f"public key {len(encode_public_key(pk))} B, secret key {len(encode_secret_key(sk, DEFAULT_PARAMS))} B")
    print(f"signature {len(blob)} B packed (expected {expected_signature_size(DEFAULT_PARAMS):.0f} B), "
          f"{len(encode_signature(sig, SIG_VERSION_CANONICAL))} B canonical")
    print(f"verify original message: {bool(verify_signature(pk, msg, decode_signature(blob)))}")
    print(f"verify altered message: {bool(verify_signature(pk, b'pay 99 coins to bob', sig))}")


if __name__ == "__main__":
    main()

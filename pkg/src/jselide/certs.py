"""Certificate authority and per-host leaf minting for TLS interception.

The proxy terminates TLS on the origin's behalf, so each intercepted host
gets a leaf certificate minted on demand from a locally trusted CA. One EC
key is shared by all leaves (only the CA key matters for trust) and minted
contexts are memoized per host.
"""

from __future__ import annotations

import datetime
import ipaddress
import ssl
import tempfile
import threading
from pathlib import Path

from cryptography import x509
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.x509.oid import NameOID

__all__ = ["generate_ca", "CertificateMinter"]

_ONE_DAY = datetime.timedelta(days=1)


def _new_key() -> ec.EllipticCurvePrivateKey:
    return ec.generate_private_key(ec.SECP256R1())


def generate_ca(common_name: str = "jselide interception CA") -> tuple[bytes, bytes]:
    """Create a self-signed CA; returns (cert_pem, key_pem)."""
    key = _new_key()
    name = x509.Name([
        x509.NameAttribute(NameOID.COMMON_NAME, common_name),
        x509.NameAttribute(NameOID.ORGANIZATION_NAME, "jselide"),
    ])
    now = datetime.datetime.now(datetime.timezone.utc)
    cert = (
        x509.CertificateBuilder()
        .subject_name(name)
        .issuer_name(name)
        .public_key(key.public_key())
        .serial_number(x509.random_serial_number())
        .not_valid_before(now - _ONE_DAY)
        .not_valid_after(now + datetime.timedelta(days=3650))
        .add_extension(x509.BasicConstraints(ca=True, path_length=0), critical=True)
        .add_extension(
            x509.KeyUsage(
                digital_signature=True, key_cert_sign=True, crl_sign=True,
                content_commitment=False, key_encipherment=False,
                data_encipherment=False, key_agreement=False,
                encipher_only=False, decipher_only=False,
            ),
            critical=True,
        )
        .sign(key, hashes.SHA256())
    )
    cert_pem = cert.public_bytes(serialization.Encoding.PEM)
    key_pem = key.private_bytes(
        serialization.Encoding.PEM,
        serialization.PrivateFormat.PKCS8,
        serialization.NoEncryption(),
    )
    return cert_pem, key_pem


class CertificateMinter:
    """Mints per-host leaf certificates chained to a CA and caches contexts."""

    def __init__(self, ca_cert_pem: bytes, ca_key_pem: bytes, workdir: str | Path | None = None):
        self._ca_cert = x509.load_pem_x509_certificate(ca_cert_pem)
        self._ca_key = serialization.load_pem_private_key(ca_key_pem, password=None)
        self._ca_cert_pem = ca_cert_pem
        self._leaf_key = _new_key()
        self._lock = threading.Lock()
        self._contexts: dict[str, ssl.SSLContext] = {}
        self._dir = Path(workdir) if workdir else Path(tempfile.mkdtemp(prefix="jselide-certs-"))
        self._dir.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_files(cls, ca_cert: str | Path, ca_key: str | Path,
                   workdir: str | Path | None = None) -> "CertificateMinter":
        return cls(Path(ca_cert).read_bytes(), Path(ca_key).read_bytes(), workdir)

    def mint_leaf(self, host: str) -> tuple[bytes, bytes]:
        """Leaf cert for `host` (DNS name or IP literal); returns PEM pair."""
        try:
            san: x509.GeneralName = x509.IPAddress(ipaddress.ip_address(host))
        except ValueError:
            san = x509.DNSName(host)
        now = datetime.datetime.now(datetime.timezone.utc)
        cert = (
            x509.CertificateBuilder()
            .subject_name(x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, host[:64])]))
            .issuer_name(self._ca_cert.subject)
            .public_key(self._leaf_key.public_key())
            .serial_number(x509.random_serial_number())
            .not_valid_before(now - _ONE_DAY)
            .not_valid_after(now + datetime.timedelta(days=397))
            .add_extension(x509.SubjectAlternativeName([san]), critical=False)
            .add_extension(x509.BasicConstraints(ca=False, path_length=None), critical=True)
            .add_extension(
                x509.ExtendedKeyUsage([x509.oid.ExtendedKeyUsageOID.SERVER_AUTH]),
                critical=False,
            )
            .sign(self._ca_key, hashes.SHA256())
        )
        cert_pem = cert.public_bytes(serialization.Encoding.PEM)
        key_pem = self._leaf_key.private_bytes(
            serialization.Encoding.PEM,
            serialization.PrivateFormat.PKCS8,
            serialization.NoEncryption(),
        )
        return cert_pem, key_pem

    def context_for(self, host: str) -> ssl.SSLContext:
        """Server-side TLS context presenting a minted leaf for `host`."""
        with self._lock:
            ctx = self._contexts.get(host)
            if ctx is not None:
                return ctx
            cert_pem, key_pem = self.mint_leaf(host)
            bundle = self._dir / f"{host.replace(':', '_')}.pem"
            bundle.write_bytes(cert_pem + self._ca_cert_pem + key_pem)
            ctx = ssl.SSLContext(ssl.PROTOCOL_TLS_SERVER)
            ctx.load_cert_chain(bundle)
            self._contexts[host] = ctx
            return ctx

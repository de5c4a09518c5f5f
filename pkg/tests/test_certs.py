"""CA generation and per-host leaf minting."""

from cryptography import x509
from cryptography.hazmat.primitives.asymmetric import ec

from jselide.certs import CertificateMinter, generate_ca


def test_ca_is_self_signed_ca():
    cert_pem, key_pem = generate_ca()
    cert = x509.load_pem_x509_certificate(cert_pem)
    assert cert.issuer == cert.subject
    bc = cert.extensions.get_extension_for_class(x509.BasicConstraints).value
    assert bc.ca


def test_leaf_chains_to_ca_and_names_host():
    ca_cert, ca_key = generate_ca()
    minter = CertificateMinter(ca_cert, ca_key)
    leaf_pem, _ = minter.mint_leaf("shop.example.com")
    leaf = x509.load_pem_x509_certificate(leaf_pem)
    ca = x509.load_pem_x509_certificate(ca_cert)
    assert leaf.issuer == ca.subject
    san = leaf.extensions.get_extension_for_class(x509.SubjectAlternativeName).value
    assert san.get_values_for_type(x509.DNSName) == ["shop.example.com"]
    # signature checks out against the CA key
    ca.public_key().verify(
        leaf.signature, leaf.tbs_certificate_bytes, ec.ECDSA(leaf.signature_hash_algorithm)
    )


def test_ip_hosts_get_ip_san():
    ca_cert, ca_key = generate_ca()
    minter = CertificateMinter(ca_cert, ca_key)
    leaf_pem, _ = minter.mint_leaf("127.0.0.1")
    leaf = x509.load_pem_x509_certificate(leaf_pem)
    san = leaf.extensions.get_extension_for_class(x509.SubjectAlternativeName).value
    assert [str(ip) for ip in san.get_values_for_type(x509.IPAddress)] == ["127.0.0.1"]


def test_contexts_memoized_per_host():
    ca_cert, ca_key = generate_ca()
    minter = CertificateMinter(ca_cert, ca_key)
    assert minter.context_for("a.example") is minter.context_for("a.example")
    assert minter.context_for("a.example") is not minter.context_for("b.example")

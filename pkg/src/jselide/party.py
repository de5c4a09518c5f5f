"""First- vs third-party classification of resource hosts.

A resource is first-party when its host matches an operator-supplied
override pattern or shares a registrable domain (public suffix plus one
label) with the page host. Ships with a snapshot of the public suffix list
covering the common ICANN and private-registry entries; a full
``public_suffix_list.dat`` can be loaded for exhaustive coverage.
"""

from __future__ import annotations

import enum
import ipaddress
import re
from fnmatch import fnmatchcase
from pathlib import Path

__all__ = ["Party", "InvalidHost", "PublicSuffixList", "classify_party", "registrable_domain"]


class InvalidHost(ValueError):
    pass


class Party(enum.Enum):
    FIRST = "First"
    THIRD = "Third"


# Snapshot of public suffix rules: ICANN entries for common registries plus
# widely used private-registry hosts. Wildcard and exception rules use the
# upstream syntax.
_SNAPSHOT_RULES = """
com org net edu gov mil int info biz xyz io co ai dev app me tv cc ws mobi
name pro aero asia cat coop jobs museum tel travel post site online store
tech blog cloud page art wiki club fun games news shop space top vip live
de fr it nl es se no fi dk pl ch at be ie pt gr cz sk hu ro bg hr si lt lv
ee lu is li mt cy al ba mk rs me ua by md ge am az kz uz tm kg tj
ru su cn jp kr tw hk sg my th vn ph id in pk bd lk np ir iq sa ae il tr
eg ma dz tn ly ng ke za gh ci sn cm ug tz et zm zw mw mz ao bw na
au nz ca mx br ar cl pe uy py bo ec ve gt cr pa do cu hn ni sv
uk co.uk org.uk me.uk ltd.uk plc.uk net.uk sch.uk ac.uk gov.uk nhs.uk
ac.jp ad.jp co.jp ed.jp go.jp gr.jp lg.jp ne.jp or.jp
*.kawasaki.jp *.kitakyushu.jp *.kobe.jp *.nagoya.jp *.sapporo.jp
*.sendai.jp *.yokohama.jp
!city.kawasaki.jp !city.kitakyushu.jp !city.kobe.jp !city.nagoya.jp
!city.sapporo.jp !city.sendai.jp !city.yokohama.jp
com.au net.au org.au edu.au gov.au asn.au id.au
co.nz net.nz org.nz govt.nz ac.nz
com.br net.br org.br gov.br edu.br
com.mx org.mx net.mx gob.mx edu.mx
com.ar net.ar org.ar gob.ar edu.ar
co.in net.in org.in firm.in gen.in ind.in ac.in edu.in gov.in
com.cn net.cn org.cn gov.cn edu.cn ac.cn
co.kr ne.kr or.kr re.kr go.kr ac.kr
com.tw net.tw org.tw edu.tw gov.tw
com.hk net.hk org.hk edu.hk gov.hk
com.sg net.sg org.sg edu.sg gov.sg
co.th in.th or.th ac.th go.th
co.id or.id ac.id go.id web.id
com.my net.my org.my edu.my gov.my
com.ph net.ph org.ph
com.vn net.vn org.vn
co.il org.il net.il ac.il gov.il muni.il
com.tr net.tr org.tr edu.tr gov.tr
co.za org.za net.za web.za ac.za gov.za
com.eg edu.eg gov.eg
com.sa edu.sa gov.sa
co.ke or.ke ac.ke go.ke
com.ng net.ng org.ng edu.ng gov.ng
com.gh edu.gh gov.gh
*.ck !www.ck
*.bd *.er *.fk *.jm *.kh *.mm *.pg
us ca co.ca
github.io gitlab.io bitbucket.io
blogspot.com appspot.com googleapis.com run.app web.app firebaseapp.com
herokuapp.com netlify.app vercel.app pages.dev workers.dev glitch.me
azurewebsites.net cloudapp.net trafficmanager.net
cloudfront.net s3.amazonaws.com elb.amazonaws.com
fastly.net edgekey.net edgesuite.net akamaized.net akamaihd.net
wordpress.com wixsite.com squarespace.com weebly.com
"""

_HOST_RE = re.compile(r"^[a-z0-9]([a-z0-9-]*[a-z0-9])?$")


class PublicSuffixList:
    """Public-suffix matcher implementing the upstream algorithm.

    Rules match labels right to left; ``*`` matches exactly one label;
    exception rules (``!``) take precedence and shorten the suffix by one
    label; with no matching rule the prevailing suffix is the last label.
    """

    def __init__(self, rules: list[str]):
        self._exact: set[tuple[str, ...]] = set()
        self._wild: set[tuple[str, ...]] = set()
        self._exception: set[tuple[str, ...]] = set()
        for rule in rules:
            rule = rule.strip().lower()
            if not rule or rule.startswith("//"):
                continue
            target = self._exact
            if rule.startswith("!"):
                rule = rule[1:]
                target = self._exception
            labels = tuple(rule.split("."))
            if labels[0] == "*":
                self._wild.add(labels[1:])
            else:
                target.add(labels)

    @classmethod
    def snapshot(cls) -> "PublicSuffixList":
        return cls(_SNAPSHOT_RULES.split())

    @classmethod
    def from_file(cls, path: str | Path) -> "PublicSuffixList":
        rules = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("//"):
                continue
            rules.append(line.split()[0])
        return cls(rules)

    def suffix_length(self, labels: tuple[str, ...]) -> int:
        """Number of labels in the public suffix of `labels`."""
        best = 1  # prevailing rule: "*"
        for n in range(1, len(labels) + 1):
            tail = labels[-n:]
            if tail in self._exception:
                return n - 1
            if tail in self._exact and n > best:
                best = n
            # wildcard rule *.X consumes one extra label beyond X
            if n >= 2 and tail[1:] in self._wild and n > best:
                best = n
        return best


_DEFAULT_PSL = PublicSuffixList.snapshot()


def _validate_host(host: str) -> str:
    if not isinstance(host, str) or not host:
        raise InvalidHost("empty host")
    host = host.rstrip(".")
    if not host:
        raise InvalidHost("empty host")
    if host != host.lower():
        raise InvalidHost(f"host must be lowercase: {host!r}")
    # IP literals are valid hosts with no registrable domain structure
    try:
        ipaddress.ip_address(host.strip("[]"))
        return host
    except ValueError:
        pass
    for label in host.split("."):
        if not _HOST_RE.match(label):
            raise InvalidHost(f"invalid host label {label!r} in {host!r}")
    return host


def registrable_domain(host: str, psl: PublicSuffixList | None = None) -> str | None:
    """Public suffix plus one label; None when the host is itself a suffix.

    IP literals are their own registrable domain.
    """
    host = _validate_host(host)
    try:
        ipaddress.ip_address(host.strip("[]"))
        return host
    except ValueError:
        pass
    psl = psl or _DEFAULT_PSL
    labels = tuple(host.split("."))
    n = psl.suffix_length(labels)
    if len(labels) <= n:
        return None
    return ".".join(labels[-(n + 1):])


def classify_party(
    resource_host: str,
    page_host: str,
    overrides: list[str] | None = None,
    psl: PublicSuffixList | None = None,
) -> Party:
    resource_host = _validate_host(resource_host)
    page_host = _validate_host(page_host)
    for pattern in overrides or []:
        p = pattern.strip().lower()
        if resource_host == p or fnmatchcase(resource_host, p):
            return Party.FIRST
    r = registrable_domain(resource_host, psl)
    p = registrable_domain(page_host, psl)
    if r is not None and p is not None and r == p:
        return Party.FIRST
    if r is None and p is None and resource_host == page_host:
        return Party.FIRST
    return Party.THIRD

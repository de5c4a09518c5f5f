"""Browser-side code templates injected into rewritten JS resources.

Four templates, substituted with `string.Template` placeholders:

* prologue  — declares the per-resource coverage array under a global whose
  name derives from the content hash, and schedules a one-shot beacon that
  fires after the window load event completes (load listener plus zero-delay
  deferral). Falls back to a fixed-delay timer where no page-load event
  context exists. Ids are deduplicated before send; transport is
  ``navigator.sendBeacon`` with a synchronous XHR fallback.
* marker    — appends one function id to the coverage array; guarded so it
  can never throw even if the global was clobbered. Starts with ``;`` so it
  can be inserted directly after a directive prologue string.
* stub      — replacement body for an elided function: synchronously fetches
  the sidecar (memoized per URL for the page lifetime) and evaluates it with
  direct ``eval`` so the enclosing scope chain stays visible.
* sidecar wrapper — wraps the original body as an immediately-applied
  anonymous function so one evaluation step both defines and invokes it with
  the forwarded receiver and arguments.

Every template substitutes to JS that is valid in both strict and sloppy
mode. All templates are single-line so mechanical removal is line-safe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from string import Template

__all__ = [
    "RuntimeTemplates",
    "DEFAULT_BEACON_PATH",
    "SIDECAR_PATH_PREFIX",
    "default_templates",
    "coverage_global",
    "render_prologue",
    "render_marker",
    "render_stub",
    "render_sidecar",
    "sidecar_url_base",
]

DEFAULT_BEACON_PATH = "/__jscov__/beacon"
SIDECAR_PATH_PREFIX = "/__jscov__/body"

# sentinels let the stripper find injected text without bookkeeping
PROLOGUE_SENTINEL = "/*jscov:p*/"
MARKER_SENTINEL = "/*jscov:m*/"
ARROW_SENTINEL = "/*jscov:a*/"

PROLOGUE_TPL = (
    ";" + PROLOGUE_SENTINEL + "var $COV_GLOBAL=$COV_GLOBAL||[];"
    "(function(c,k,u){var s=false;"
    "function dd(a){var m={},o=[],i;for(i=0;i<a.length;i++){if(!m[a[i]]){m[a[i]]=true;o.push(a[i])}}return o}"
    "function send(){if(s)return;s=true;"
    'var p=JSON.stringify({v:1,key:k,ids:dd(c),page:(typeof location!=="undefined"&&location&&location.href)||null});'
    "var ok=false;"
    'try{if(typeof navigator!=="undefined"&&navigator&&navigator.sendBeacon){ok=navigator.sendBeacon(u,p)}}catch(e){}'
    'if(!ok){try{var x=new XMLHttpRequest();x.open("POST",u,false);x.setRequestHeader("Content-Type","application/json");x.send(p)}catch(e){}}}'
    'if(typeof window!=="undefined"&&window&&typeof window.addEventListener==="function"){'
    'if(typeof document!=="undefined"&&document&&document.readyState==="complete"){setTimeout(send,0)}'
    'else{window.addEventListener("load",function(){setTimeout(send,0)})}}'
    "else{setTimeout(send,1000)}"
    '})($COV_GLOBAL,$KEY_JSON,"$BEACON_URL");\n'
)

MARKER_TPL = (
    ";" + MARKER_SENTINEL
    + 'typeof $COV_GLOBAL!=="undefined"&&$COV_GLOBAL&&$COV_GLOBAL.push&&$COV_GLOBAL.push("$FID");'
)

STUB_TPL = (
    "{return eval((function(u){"
    'var g=typeof globalThis!=="undefined"?globalThis:typeof window!=="undefined"?window:{};'
    "var c=g.__jscov_bodies=g.__jscov_bodies||{};"
    "if(!(u in c)){var x=new XMLHttpRequest();x.open(\"GET\",u,false);x.send(null);"
    'if(x.status!==200&&x.status!==0){throw new Error("jscov: failed to load elided body "+u+" (status "+x.status+")")}'
    "c[u]=x.responseText}"
    'return c[u]})("$BODY_URL"));}'
)

SIDECAR_WRAPPER_TPL = "(function()$ORIGINAL_BODY).apply(this,arguments);"


@dataclass(frozen=True)
class RuntimeTemplates:
    prologue_tpl: str = PROLOGUE_TPL
    marker_tpl: str = MARKER_TPL
    stub_tpl: str = STUB_TPL
    sidecar_wrapper_tpl: str = SIDECAR_WRAPPER_TPL


_DEFAULT = RuntimeTemplates()


def default_templates() -> RuntimeTemplates:
    return _DEFAULT


def coverage_global(content_hash: str) -> str:
    """Collision-safe global name for one resource's coverage array."""
    return "__jscov_" + content_hash[:8]


def render_prologue(tpl: RuntimeTemplates, key, beacon_url: str) -> str:
    key_json = json.dumps({"url": key.url, "hash": key.content_hash}, ensure_ascii=True)
    return Template(tpl.prologue_tpl).substitute(
        COV_GLOBAL=coverage_global(key.content_hash),
        KEY_JSON=key_json,
        BEACON_URL=beacon_url,
    )


def render_marker(tpl: RuntimeTemplates, content_hash: str, fid: str, arrow: bool = False) -> str:
    text = Template(tpl.marker_tpl).substitute(
        COV_GLOBAL=coverage_global(content_hash), FID=fid,
    )
    if arrow:
        text = text.replace(MARKER_SENTINEL, ARROW_SENTINEL, 1)
    return text


def render_stub(tpl: RuntimeTemplates, body_url: str, generator: bool = False) -> str:
    text = Template(tpl.stub_tpl).substitute(BODY_URL=body_url)
    if generator:
        # delegate so the caller-visible iterator protocol is preserved
        text = text.replace("{return eval(", "{return yield*eval(", 1)
    return text


def render_sidecar(
    tpl: RuntimeTemplates,
    body_text: str,
    kind: str,
    is_async: bool,
    is_generator: bool,
    body_is_block: bool,
) -> str:
    """Wrap an original body so one direct evaluation defines and runs it.

    Arrows get an arrow wrapper (keeps ``this``/``arguments``/``super``
    resolving lexically, exactly as the original body did); everything else
    gets a function wrapper applied to the forwarded receiver and arguments,
    with async/generator headers when the original carried them.
    """
    if kind == "arrow":
        head = "(async ()=>" if is_async else "(()=>"
        inner = body_text if body_is_block else "(" + body_text + ")"
        return head + inner + ")();"
    if not is_async and not is_generator:
        return Template(tpl.sidecar_wrapper_tpl).substitute(ORIGINAL_BODY=body_text)
    header = "async function" if is_async else "function"
    if is_generator:
        header += "*"
    return "(" + header + "()" + body_text + ").apply(this,arguments);"


def sidecar_url_base(content_hash: str, prefix: str = SIDECAR_PATH_PREFIX) -> str:
    return f"{prefix}/{content_hash}"

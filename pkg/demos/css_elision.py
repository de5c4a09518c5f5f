"""Drop CSS rules outside externally observed used byte ranges."""

from jselide import SourceSpan, elide_css

CSS = "body{margin:0} .hero{color:#123} .unused-banner{display:flex} .cta{font-weight:bold}"


def main():
    data = CSS.encode()
    used = [
        SourceSpan(0, 14),                                   # body{...}
        SourceSpan(15, 33),                                  # .hero{...}
        SourceSpan(data.index(b".cta"), len(data)),          # .cta{...}
    ]
    print("before:", CSS)
    print("after: ", elide_css(CSS, used))


if __name__ == "__main__":
    main()

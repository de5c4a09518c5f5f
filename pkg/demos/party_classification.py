"""First- vs third-party calls the way the reporter makes them."""

from jselide import classify_party, registrable_domain

PAGE = "www.shop.example.co.uk"
HOSTS = [
    "static.shop.example.co.uk",
    "img.cdn-for-shop.net",
    "alice.github.io",
    "shop-assets.example.co.uk",
]


def main():
    print(f"page host: {PAGE} (registrable: {registrable_domain(PAGE)})")
    for host in HOSTS:
        party = classify_party(host, PAGE, overrides=["*.cdn-for-shop.net"])
        print(f"{host:<28} -> {party.value:<6} (registrable: {registrable_domain(host)})")


if __name__ == "__main__":
    main()

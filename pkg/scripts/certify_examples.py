"""Certify the three headline inputs and re-verify each from its JSON form.

Writes certificates next to this script as cert_<name>.json.
"""

import json
import pathlib
import sys
import time

sys.path.insert(0, "src")

from latcert.forms import direct_sum, e8_form, unit_form
from latcert.neighbors import gamma_lattice
from latcert.realize import certify, verify_certificate

CASES = {
    "e8_plus_unit": direct_sum(e8_form(), unit_form(1)),
    "unit_nine": unit_form(9),
    "gamma_twelve": gamma_lattice(12),
}


def main():
    out_dir = pathlib.Path(__file__).resolve().parent
    for name, form in CASES.items():
        started = time.monotonic()
        cert = certify(form)
        doc = cert.to_json_dict()
        assert verify_certificate(json.loads(json.dumps(doc)))
        path = out_dir / f"cert_{name}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"{name}: status={cert.status} knotted={cert.knotted} "
              f"classes={len(cert.classification)} "
              f"({time.monotonic() - started:.1f}s) -> {path.name}")


if __name__ == "__main__":
    main()

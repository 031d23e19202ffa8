"""Regenerates the CBN fixture files in this directory.

Usage: python3 make_fixtures.py [output_dir]
"""
import json
import os
import sys

FORMAT = "scriptcausal-cbn v1"


def normalized(weights):
    total = sum(weights.values())
    return {k: v / total for k, v in weights.items()}


def popcorn():
    # Kernels are log-additive in (previous event, scenario):
    #   g_z(l | k) proportional to base_k(l) * affinity_z(l),
    # which the finetuned conditional model can represent exactly. The
    # template rows below are chosen so that mixing with the uniform
    # component reproduces that product form.
    names = ["watch_sad", "eat_popcorn", "cry", "buy_ticket", "leave", "drive", "shop", "pay"]
    events = [n + ":nsubj" for n in names]
    smoothing = 0.1
    floor = 0.8
    affinity = {
        "sad-cinema": {"watch_sad": 1, "eat_popcorn": 1, "cry": 1, "buy_ticket": 1,
                       "leave": 0.4, "drive": 0.3, "shop": 0.3, "pay": 0.3},
        "errand": {"watch_sad": 1.5, "eat_popcorn": 0.3, "cry": 0.3, "buy_ticket": 0.3,
                   "leave": 1, "drive": 1, "shop": 1, "pay": 1},
    }
    base = {
        "<s>": {"buy_ticket": 4, "drive": 4, "watch_sad": 1},
        "buy_ticket": {"eat_popcorn": 5, "watch_sad": 3, "pay": 1},
        "eat_popcorn": {"watch_sad": 5, "cry": 2.5, "eat_popcorn": 1, "leave": 1},
        "watch_sad": {"cry": 6, "leave": 2, "eat_popcorn": 1},
        "cry": {"leave": 3, "cry": 1.5, "eat_popcorn": 1},
        "leave": {"drive": 4, "shop": 1, "cry": 0.5},
        "drive": {"shop": 4, "leave": 1, "pay": 1, "watch_sad": 1.5},
        "shop": {"pay": 5, "leave": 1, "cry": 0.3},
        "pay": {"leave": 4, "drive": 2, "watch_sad": 1.5},
    }
    priors = {"sad-cinema": 0.4, "errand": 0.6}
    oot = {"sad-cinema": "sad_cinema:scenario", "errand": "errand:scenario"}
    scenarios = []
    for z in ["sad-cinema", "errand"]:
        kernel = {}
        for src, extra in base.items():
            target = {n: (floor + extra.get(n, 0.0)) * affinity[z][n] for n in names}
            target = normalized(target)
            uniform = smoothing / len(names)
            row = {}
            for n in names:
                t = (target[n] - uniform) / (1 - smoothing)
                if t < 0:
                    raise SystemExit("product-form row below the uniform floor")
                row[n + ":nsubj"] = t
            kernel[src if src == "<s>" else src + ":nsubj"] = row
        scenarios.append({"name": z, "prior": priors[z], "oot_event": oot[z], "kernel": kernel})
    return {
        "format": FORMAT, "name": "F-POPCORN", "length": 10, "smoothing": smoothing,
        "events": events,
        "roles": {"direct_cause": "watch_sad:nsubj", "confounded_sibling": "eat_popcorn:nsubj",
                  "effect": "cry:nsubj"},
        "scenarios": scenarios,
    }


def det():
    names = ["wake", "shower", "dress", "commute", "work", "lunch", "return", "sleep"]
    events = [n + ":nsubj" for n in names]
    kernel = {"<s>": {events[0]: 1}}
    for i, e in enumerate(events):
        kernel[e] = {events[(i + 1) % len(events)]: 1}
    return {
        "format": FORMAT, "name": "F-DET", "length": 10, "smoothing": 0.02,
        "events": events, "roles": {"first": events[0]},
        "scenarios": [{"name": "routine", "prior": 1.0, "oot_event": "routine:scenario",
                       "kernel": kernel}],
    }


def uniform():
    names = ["open", "read", "write", "close", "send", "file"]
    events = [n + ":dobj" for n in names]
    flat = {e: 1 for e in events}
    return {
        "format": FORMAT, "name": "F-UNIFORM", "length": 8, "smoothing": 0.5,
        "events": events, "roles": {},
        "scenarios": [{"name": "flat", "prior": 1.0, "oot_event": "flat:scenario",
                       "kernel": {"<s>": flat, "*": flat}}],
    }


def zipf(num_events=400, groups=10, exponent=1.3, shared=0.96, group_exponent=0.3):
    # Every event mostly predicts the global Zipf distribution; a small share
    # goes to the members of its own group, flattened so that rare members
    # get a specific but low absolute probability.
    events = ["act%03d:nsubj" % i for i in range(num_events)]
    zipf_w = [(i + 1) ** -exponent for i in range(num_events)]
    zt = sum(zipf_w)
    unigram = [w / zt for w in zipf_w]
    kernel = {"<s>": dict(zip(events, unigram)),
              "*": {e: shared * p for e, p in zip(events, unigram)}}
    for g in range(groups):
        members = list(range(g, num_events, groups))
        flat = [unigram[i] ** group_exponent for i in members]
        ft = sum(flat)
        row = {events[i]: (1 - shared) * w / ft for i, w in zip(members, flat)}
        for i in members:
            kernel[events[i]] = row
    return {
        "format": FORMAT, "name": "F-ZIPF", "length": 10, "smoothing": 0.02,
        "events": events, "roles": {},
        "scenarios": [{"name": "single", "prior": 1.0, "oot_event": "single:scenario",
                       "kernel": kernel}],
    }


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))
    for name, doc in [("f_popcorn.json", popcorn()), ("f_det.json", det()),
                      ("f_uniform.json", uniform()), ("f_zipf.json", zipf())]:
        with open(os.path.join(out, name), "w") as f:
            json.dump(doc, f, indent=1)
            f.write("\n")


if __name__ == "__main__":
    main()

"""Generate the synthetic end-to-end fixture: tweets, users and lookup tables.

Sentiment toward masks is positive for everyone during the first 20 days;
from day 21 Democrats stay positive while everyone else turns negative.
The generator tracks how many tweets it planted in each drop category and
writes that as ``expected_filter_stats.json``.

    python -m maskshift.synthetic OUT_DIR [--seed N]
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import random
from pathlib import Path

from .demographics.names import read_labeled_names

EPOCH = dt.date(2020, 1, 27)
N_DAYS = 40
SHIFT_DAY = 21          # first day (1-based) of the second regime
N_TWEETS = 1000
N_SPANISH = 30
N_OFF_TOPIC = 60
N_ORG = 25
N_USERS = 120
N_ORGS = 5

POSITIVE = [
    "Wearing a face mask is smart and keeps my family safe",
    "Love seeing everyone wear masks at the store today, great job",
    "My mask keeps my students safe at school, proud of our teachers",
    "Glad the governor supports masks, good policy that protects people",
    "Masks work! Doctors agree they help protect the community",
    "Made a cute cloth mask today, happy to help",
    "Thank you nurses for wearing N95 masks every shift, heroes",
    "Wear a mask so we can enjoy a concert again next summer",
    "Proud of my coworkers for wearing masks, we care about each other",
    "Good news: free face masks for every student at the college",
]
NEGATIVE = [
    "Masks are useless and this mandate is ridiculous",
    "I hate wearing a mask at work, so uncomfortable and stupid",
    "The mask order from the governor is a terrible overreach",
    "Stop forcing kids to wear masks at school, this is awful",
    "Face masks are a joke, the CDC lied to us",
    "Angry that stores demand masks, worst policy ever",
    "No mask for me, this fear is pathetic",
    "Sick of the mask police, what a disaster",
    "Fake science behind masks, I am furious",
    "Wearing a mask all day at the office is miserable",
]
OFF_TOPIC = [
    "Great game last night, what a finish",
    "Setting the bitmask flags in C is tricky",
    "The unmasked singer won the show",
    "Coffee first, then emails",
    "Traffic on the bridge is terrible again",
    "New recipe for banana bread turned out fine",
]
SPANISH = [
    "Usa tu mask por favor, cuida a tu familia",
    "Las mascarillas salvan vidas, usa tu face mask",
    "No me gusta la mask en el trabajo",
]
DECORATIONS = [" https://t.co/abc123", " #MaskUp", " @CDCgov", " 😷", " #WearAMask", " 😡", "", "", ""]

CITIES = [
    # city, state, zip, county_fips, median_income, rucc_code (synthetic values)
    ("Austin", "TX", "78701", "48453", 71000, 1),
    ("Marfa", "TX", "79843", "48377", 38000, 7),
    ("Boston", "MA", "02108", "25025", 63179, 1),
    ("Burlington", "VT", "05401", "50007", 58000, 3),
    ("Bangor", "ME", "04401", "23019", 45000, 3),
    ("Des Moines", "IA", "50309", "19153", 61000, 2),
    ("Fargo", "ND", "58102", "38017", 57000, 3),
    ("Tulsa", "OK", "74103", "40143", 50000, 2),
    ("Nashville", "TN", "37201", "47037", 66000, 1),
    ("Athens", "GA", "30601", "13059", 40000, 3),
    ("Greenville", "MS", "38701", "28151", 31000, 5),
    ("Denver", "CO", "80202", "08031", 82000, 1),
    ("Bozeman", "MT", "59715", "30031", 64000, 5),
    ("Boise", "ID", "83702", "16001", 62000, 2),
    ("Seattle", "WA", "98101", "53033", 96000, 1),
    ("Elko", "NV", "89801", "32007", 74000, 5),
]
STATE_NAMES = {"TX": "Texas", "MA": "Massachusetts", "IA": "Iowa", "WA": "Washington"}
UNMATCHED_LOCATIONS = ["Earth", "Gotham City, ZZ", "", "somewhere over the rainbow"]

DEM_ACCOUNTS = [f"dem{i:02d}" for i in range(10)]
REP_ACCOUNTS = [f"rep{i:02d}" for i in range(10)]
OTHER_ACCOUNTS = [f"acct{i:02d}" for i in range(20)]
POLITICAL_KEYWORDS = ["vote", "senate", "election", "congress", "democrat", "republican",
                      "president", "governor", "policy", "ballot"]

COLLEGE_LINES = ["my professor assigned so much reading", "studying late in my dorm",
                 "my roommate ate my snacks", "my textbook costs more than rent",
                 "my classes moved online", "finals week in my dorm again"]
NONCOLLEGE_LINES = ["my kids need new shoes", "my boss wants the report today",
                    "my mortgage payment is due", "my commute took an hour",
                    "my wife made dinner", "my retirement account dropped"]
NEUTRAL_LINES = ["nice weather today", "watching the game tonight", "coffee time",
                 "reading a good book", "walked the dog"]
POLITICAL_LINES = ["go vote in the election", "call your senate office",
                   "the governor should listen", "congress needs to act", "ballot came today"]
AGES = ["≤18", "19-29", "30-39", "≥40"]


def _tokens(line: str) -> list[str]:
    return line.lower().split()


def _users(rng: random.Random):
    names = read_labeled_names()
    users = []
    for i in range(N_USERS):
        uid = f"u{i:03d}"
        if i < 40:
            party = "Democrat"
        elif i < 80:
            party = "Republican"
        else:
            party = None
        following = rng.sample(OTHER_ACCOUNTS, 3)
        if party == "Democrat":
            following += rng.sample(DEM_ACCOUNTS, 2)
        elif party == "Republican":
            following += rng.sample(REP_ACCOUNTS, 2)
        elif i % 10 == 0:
            following += [DEM_ACCOUNTS[0], REP_ACCOUNTS[0]]   # follows both sides
        first, last, _ = rng.choice(names)
        name = f"{first.title()} {last.title()}"
        if i % 17 == 0:
            name = "😷 mask fan account 😷"
        if i % 9 == 4:
            loc = rng.choice(UNMATCHED_LOCATIONS)
        else:
            city, st = rng.choice(CITIES)[:2]
            loc = f"{city}, {STATE_NAMES.get(st, st) if i % 3 == 0 else st}"
        users.append({"author_id": uid, "name": name, "location": loc,
                      "following": sorted(following), "party": party,
                      "college": i % 4 == 1})
    for j in range(N_ORGS):
        users.append({"author_id": f"org{j}", "name": "Acme Health News", "location": "Boston, MA",
                      "following": [], "party": None, "college": False})
    return users


def _timeline(rng: random.Random, user) -> list[list[str]]:
    lines = rng.sample(NEUTRAL_LINES, 2)
    if user["college"]:
        lines += rng.sample(COLLEGE_LINES, 3)
    else:
        lines += rng.sample(NONCOLLEGE_LINES, 3)
    if user["party"] or user["author_id"].endswith("0"):
        lines += rng.sample(POLITICAL_LINES, 2)
    idx = int(user["author_id"][1:]) if user["author_id"].startswith("u") else -1
    if idx in (2, 6):
        lines += ["my professor said so"] * 6     # override trigger on a non-college user
    return [_tokens(x) for x in lines]


def _timestamp(rng: random.Random, day: int) -> str:
    when = dt.datetime.combine(EPOCH + dt.timedelta(days=day - 1), dt.time()) + \
        dt.timedelta(seconds=rng.randrange(86400))
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def _text(rng, positive: bool) -> str:
    return rng.choice(POSITIVE if positive else NEGATIVE) + rng.choice(DECORATIONS)


def generate(out_dir, seed: int = 20200127) -> dict:
    rng = random.Random(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    users = _users(rng)
    people = [u for u in users if not u["author_id"].startswith("org")]
    orgs = [u for u in users if u["author_id"].startswith("org")]

    tweets = []
    n_topic = N_TWEETS - N_SPANISH - N_OFF_TOPIC - N_ORG
    for i in range(n_topic):
        day = i % N_DAYS + 1
        user = rng.choice(people)
        favourable = day < SHIFT_DAY or user["party"] == "Democrat"
        if rng.random() < 0.1:
            favourable = not favourable
        tweets.append((day, user["author_id"], _text(rng, favourable), "en"))
    for i in range(N_ORG):
        tweets.append((i % N_DAYS + 1, orgs[i % N_ORGS]["author_id"], _text(rng, True), "en"))
    for i in range(N_OFF_TOPIC):
        tweets.append((rng.randrange(N_DAYS) + 1, rng.choice(people)["author_id"],
                       rng.choice(OFF_TOPIC), "en"))
    for i in range(N_SPANISH):
        tweets.append((rng.randrange(N_DAYS) + 1, rng.choice(people)["author_id"],
                       rng.choice(SPANISH), "es"))
    rng.shuffle(tweets)

    with open(out / "tweets.jsonl", "w", encoding="utf-8") as fh:
        for i, (day, author, text, lang) in enumerate(tweets):
            obj = {"id": str(1221000000000000000 + i), "created_at": _timestamp(rng, day),
                   "author_id": author, "full_text": text, "lang": lang}
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")

    with open(out / "users.jsonl", "w", encoding="utf-8") as fh:
        for u in users:
            row = {k: u[k] for k in ("author_id", "name", "location", "following")}
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")

    with open(out / "timelines.jsonl", "w", encoding="utf-8") as fh:
        for u in users:
            row = {"author_id": u["author_id"], "tweets": _timeline(rng, u)}
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")

    with open(out / "annotations.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["author_id", "age_bucket", "gender", "org_probability"])
        for k, u in enumerate(users):
            is_org = u["author_id"].startswith("org")
            age = "25" if k in (7, 8) else rng.choice(AGES)      # two rows with an invalid bucket
            w.writerow([u["author_id"], age, rng.choice(["male", "female"]),
                        "0.92" if is_org else f"{rng.uniform(0, 0.3):.2f}"])

    with open(out / "org_scores.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["author_id", "org_probability"])
        for u in users:
            w.writerow([u["author_id"], "0.92" if u["author_id"].startswith("org") else "0.05"])

    with open(out / "college_labels.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["author_id", "is_college"])
        for u in people[:60]:
            w.writerow([u["author_id"], "true" if u["college"] else "false"])

    with open(out / "party.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["account_id", "party"])
        for a in DEM_ACCOUNTS:
            w.writerow([a, "Democrat"])
        for a in REP_ACCOUNTS:
            w.writerow([a, "Republican"])
    (out / "keywords.txt").write_text("\n".join(POLITICAL_KEYWORDS) + "\n", encoding="utf-8")

    with open(out / "cities.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["city", "state", "zip", "county_fips"])
        for c in CITIES:
            w.writerow(c[:4])
    with open(out / "incomes.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["zip", "median_income"])
        for c in CITIES:
            w.writerow([c[2], c[4]])
    with open(out / "rucc.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["county_fips", "state", "rucc_code"])
        for c in CITIES:
            w.writerow([c[3], c[1], c[5]])

    (out / "terms.txt").write_text(
        "# mask vocabulary; plurals match automatically\nmask\nface mask\nface covering\n"
        "n95\nrespirator\n#maskup\n#wearamask\n#facemask\n", encoding="utf-8")
    (out / "events.csv").write_text(
        "date,label\n2020-01-30,Fixture: international emergency declared\n"
        "2020-02-17,Fixture: state mask guidance reversed\n"
        "2020-04-03,CDC recommends cloth face coverings\n"
        "2020-07-20,Presidential tweet endorsing masks\n", encoding="utf-8")

    expected = {"read": N_TWEETS, "kept": n_topic, "dropped_language": N_SPANISH,
                "dropped_no_match": N_OFF_TOPIC, "dropped_deleted": 0, "dropped_org": N_ORG}
    (out / "expected_filter_stats.json").write_text(json.dumps(expected, indent=2, sort_keys=True) + "\n")
    (out / "config.ini").write_text(CONFIG_TEMPLATE, encoding="utf-8")
    return expected


CONFIG_TEMPLATE = """\
# Pipeline configuration for the synthetic fixture. Relative paths resolve
# against this file's directory.

[run]
seed = 7
out = out

[paths]
corpus = tweets.jsonl
terms = terms.txt
org_scores = org_scores.csv
annotations = annotations.csv
users = users.jsonl
timelines = timelines.jsonl
college_labels = college_labels.csv
party_accounts = party.csv
political_keywords = keywords.txt
cities = cities.csv
incomes = incomes.csv
rucc = rucc.csv
events = events.csv

[filter]
lang = en
org_threshold = 0.5

[sentiment]

[demographics]
override_terms = professor, textbook
override_min_count = 5
n_estimators = 100
national_median = 63179

[topics]
candidates = 2, 3, 4
iterations = 200
ngram_min_count = 5
ngram_threshold = 10
top_keywords = 10
top_examples = 3
top_m = 10

[series]
epoch = 2020-01-27
end_date = 2020-03-06
filters = all; party=Democrat; party=Republican; gender=female; gender=male

[detect]
cost = MeanShift
standardize = true
min_size = 1
window_days = 3
"""


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir")
    ap.add_argument("--seed", type=int, default=20200127)
    args = ap.parse_args(argv)
    print(json.dumps(generate(args.out_dir, args.seed), sort_keys=True))


if __name__ == "__main__":
    main()

"""Write the bundled word -> (lemma, coarse POS) lookup table.

Closed-class words get their own tags so the content-word filter drops them.
Open-class base forms are expanded with regular English inflections; the
irregular forms are listed explicitly.

    python scripts/build_pos_lexicon.py > src/maskshift/data/pos_lexicon.tsv
"""
import sys

CLOSED = {
    "DET": "a an the this that these those each every some any no all both either neither another such what which whose",
    "PRON": "i me my mine myself we us our ours ourselves you your yours yourself yourselves he him his himself "
            "she her hers herself it its itself they them their theirs themselves who whom whoever someone "
            "somebody something anyone anybody anything everyone everybody everything nobody one",
    "ADP": "about above across after against along amid among around as at before behind below beneath beside "
           "between beyond by despite down during except for from in inside into like near of off on onto out "
           "outside over past per since through throughout till to toward towards under underneath until up upon "
           "via with within without",
    "CONJ": "and but or nor so yet because if unless although though while whereas whether than then",
    "AUX": "am is are was were be been being have has had having do does did doing will would shall should "
           "can could may might must ought",
    "PRT": "not n't to",
    "NUM": "zero one two three four five six seven eight nine ten hundred thousand million billion first second third",
    "INTJ": "oh ah wow lol omg yes yeah yep ok okay hey hi hello please thanks thank",
}

NOUNS = """mask face cloth covering n95 respirator glove shield doctor nurse teacher student school
college university class professor textbook work job office worker employee boss store shop customer
mall restaurant bar gym church concert game event party wedding vacation trip summer holiday beach
government governor president senator mayor policy mandate order rule law requirement guideline
guidance recommendation official state city county country nation people person family friend kid
child parent mother father grandma grandpa home house public health care hospital patient disease
illness sickness symptom test vaccine death case spread transmission risk safety protection
prevention research study evidence science scientist expert data fact news media lie conspiracy
freedom right liberty choice politics election vote campaign trump biden cdc who fauci walmart
kroger costco target walgreens airline flight plane train bus street crowd distance day week month
year time life world hand nose mouth breath air droplet particle micron material fabric filter
supply shortage price money business economy reopening lockdown quarantine shutdown curfew ppe
sanitizer soap water medicine hoax idiot fool selfish hero citizen community neighbor""".split()

VERBS = """wear need want stop protect help save kill spread cover require order mandate enforce refuse
ban buy sell make sew order share post tell ask say think believe know feel see look go come stay
work learn teach open reopen close shut start end breathe cough sneeze touch wash test prove show
suggest recommend advise change flip lie care die live hope pray support oppose complain thank
love hate walk shop travel vote follow fight argue block infect prevent reduce increase keep put
get give take try use call""".split()

IRREGULAR_VERBS = {
    "wear": ["wore", "worn"], "buy": ["bought"], "sell": ["sold"], "make": ["made"], "tell": ["told"],
    "say": ["said"], "think": ["thought"], "know": ["knew", "known"], "feel": ["felt"],
    "see": ["saw", "seen"], "go": ["went", "gone"], "come": ["came"], "teach": ["taught"],
    "shut": [], "put": [], "keep": ["kept"], "get": ["got", "gotten"], "give": ["gave", "given"],
    "take": ["took", "taken"], "spread": [], "fight": ["fought"], "sew": ["sewn"], "learn": ["learnt"],
    "lie": ["lied"], "die": ["died"], "live": ["lived"],
}

ADJECTIVES = """safe unsafe effective ineffective useless important necessary mandatory optional
public private medical surgical sick healthy dangerous deadly risky stupid smart selfish
responsible irresponsible good bad great terrible horrible awful nice happy sad angry mad scared
afraid worried hard easy new old young high low big small long short real fake true false
political social essential crowded empty free open closed local federal national annual daily
weekly homemade comfortable uncomfortable hot cold wrong right sure clear confused""".split()

IRREGULAR_ADJ = {"good": ["better", "best"], "bad": ["worse", "worst"]}

ADVERBS = """really very always never often sometimes still already just only even also again soon now
today tonight tomorrow yesterday everywhere anywhere please properly correctly finally actually
literally seriously honestly totally completely absolutely probably maybe definitely""".split()

IRREGULAR_NOUNS = {"child": "children", "person": "people", "man": "men", "woman": "women"}


def verb_forms(v):
    if v.endswith("e") and not v.endswith("ee"):
        ing, ed = v[:-1] + "ing", v + "d"
    elif v.endswith("y") and v[-2] not in "aeiou":
        ing, ed = v + "ing", v[:-1] + "ied"
    elif len(v) >= 3 and v[-1] in "bdgmnpt" and v[-2] in "aeiou" and v[-3] not in "aeiou" and v not in ("open", "visit"):
        ing, ed = v + v[-1] + "ing", v + v[-1] + "ed"
    else:
        ing, ed = v + "ing", v + "ed"
    s = v + "es" if v.endswith(("s", "sh", "ch", "x", "z", "o")) else (
        v[:-1] + "ies" if v.endswith("y") and v[-2] not in "aeiou" else v + "s")
    forms = [s, ing] + IRREGULAR_VERBS.get(v, [ed])
    return forms


def plural(n):
    if n in IRREGULAR_NOUNS:
        return IRREGULAR_NOUNS[n]
    if n.endswith(("s", "sh", "ch", "x", "z")):
        return n + "es"
    if n.endswith("y") and n[-2] not in "aeiou":
        return n[:-1] + "ies"
    return n + "s"


def main():
    rows = {}

    def add(word, lemma, pos):
        rows.setdefault(word, (lemma, pos))

    for pos, words in CLOSED.items():
        for w in words.split():
            add(w, w, pos)
    for v in VERBS:
        add(v, v, "VERB")
    for n in NOUNS:
        add(n, n, "NOUN")
        add(plural(n), n, "NOUN")
    for v in VERBS:
        for f in verb_forms(v):
            add(f, v, "VERB")
    for a in ADJECTIVES:
        add(a, a, "ADJ")
        for f in IRREGULAR_ADJ.get(a, []):
            add(f, a, "ADJ")
    for a in ADVERBS:
        add(a, a, "ADV")
    out = sys.stdout
    out.write("word\tlemma\tpos\n")
    for w in sorted(rows):
        out.write(f"{w}\t{rows[w][0]}\t{rows[w][1]}\n")


if __name__ == "__main__":
    main()

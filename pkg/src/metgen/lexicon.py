"""Word lists backing the rule-based verb tagger.

The lemma list is a curated set of common English verbs; it is not meant to
be exhaustive. Anything not derivable from these lemmas is simply never
tagged as a verb, which is the safe failure mode for corpus filtering.
"""

# Common verb lemmas (base forms). Sorted for easier maintenance.
VERB_LEMMAS = frozenset("""
accept aid allow amuse answer appear arrive ascend ask assist attack attempt
bark battle be bear beat become begin behold bend bind bite blaze bleed bless
blink bloom blossom blow boil boost bore bounce bow break breathe breed bring
brood build burgeon burn burst bury buy buzz call calm carry carve cast catch
chase chew choke choose claim clean climb cling close clutch comfort come
continue cook cover crack crackle crawl create creep cross crouch crumble
crush cry curse cut damage dance dash decay decide defend delight deliver
deny descend destroy devour die dig dive do drain drape draw dream dress
drift drink drip drive drop drown dry ease eat echo embrace empty encourage end
endure enjoy enter erupt escape exhaust exit explode fade fail fall fear feed
feel fertilize fight fill find finish fix flee flicker fling float flood flow
fly fold follow forbid forge forget form free freeze frown gallop gasp gather
gaze get give glance gleam glide glitter glow go grasp greet grieve grin grind
grip grow growl guard guide gush hang harm harvest hate have heal hear heat help
hide hit hold hop hope howl hug hum hunt hurry hurt inspire journey jump keep
kick kill kiss kneel knock know knot labor land last laugh lay lead lean leap
learn leave let lie lift light like linger listen live loosen lose love make
manage march mark melt mend miss moan mold mount mourn move murmur mutter name
need nod note open paint pass patch pause pay peer permit persist pick pierce
place play please plow polish pollute pound pour praise pray prefer prevent
prosper protect prowl pull pulse punch push put quiver race rain raise rattle
reach read receive record refresh refuse relax release remain remember renew
repair rest restore resolve return reveal revive ride ring rip rise roam roar
rock roll rot ruin run rush sail save say scream search see seek select sell
send serve set settle shake shape shatter shine shiver shout show shrug shut
sigh sign sing sink sip sit sketch skip slam slap sleep slice slide slip
slither smash smell smile smooth smother snow soak sob solve soothe sort sow
sparkle speak spend spill spin splash spout spread spring sprout squint stab
stain stalk stand stare start stay steal stir stimulate stop storm stream
strengthen stretch stride strike strive struggle stumble succeed surge
survive sway swallow sweat sweep swell swim swing take talk taste teach tear
tell thank think thrive throb throw thunder tick tide tie tighten tire toil
toss touch trail travel tremble trickle trip trot try turn twist understand
unearth unfold unfurl uplift vanish veil vibrate wade wait wake walk wander
want warm wash watch weaken wear weave weep welcome wet whisper win wink
wish wither wonder work worship wound wrap wreck write
""".split())

# Irregular inflections that suffix stripping cannot recover.
IRREGULAR_VERB_FORMS = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be",
    "been": "be", "being": "be",
    "has": "have", "had": "have",
    "did": "do", "does": "do", "done": "do",
    "said": "say", "told": "tell", "spoke": "speak", "spoken": "speak",
    "knew": "know", "known": "know", "thought": "think", "felt": "feel",
    "saw": "see", "seen": "see", "heard": "hear",
    "went": "go", "gone": "go", "came": "come", "left": "leave",
    "stood": "stand", "sat": "sit", "lay": "lie", "lain": "lie",
    "slept": "sleep", "woke": "wake", "woken": "wake", "dreamt": "dream",
    "ran": "run", "crept": "creep", "leapt": "leap", "leaped": "leap",
    "swam": "swim", "swum": "swim", "dove": "dive", "sank": "sink",
    "sunk": "sink", "flew": "fly", "flown": "fly", "fell": "fall",
    "fallen": "fall", "rose": "rise", "risen": "rise",
    "brought": "bring", "took": "take", "taken": "take", "gave": "give",
    "given": "give", "got": "get", "gotten": "get", "held": "hold",
    "caught": "catch", "bought": "buy", "paid": "pay", "sold": "sell",
    "taught": "teach", "learnt": "learn", "bound": "bind", "spun": "spin",
    "bent": "bend", "drew": "draw", "drawn": "draw", "threw": "throw",
    "thrown": "throw", "struck": "strike", "beaten": "beat",
    "broke": "break", "broken": "break", "tore": "tear", "torn": "tear",
    "burnt": "burn", "shone": "shine", "grew": "grow", "grown": "grow",
    "wept": "weep", "sang": "sing", "sung": "sing", "rang": "ring",
    "rung": "ring", "blew": "blow", "blown": "blow", "shook": "shake",
    "shaken": "shake", "made": "make", "built": "build", "fought": "fight",
    "won": "win", "lost": "lose", "found": "find", "sought": "seek",
    "led": "lead", "drove": "drive", "driven": "drive", "rode": "ride",
    "ridden": "ride", "ate": "eat", "eaten": "eat", "bit": "bite",
    "bitten": "bite", "drank": "drink", "drunk": "drink", "froze": "freeze",
    "frozen": "freeze", "hid": "hide", "hidden": "hide", "met": "meet",
    "sent": "send", "wrote": "write", "written": "write", "wore": "wear",
    "worn": "wear", "bled": "bleed", "swept": "sweep", "kept": "keep",
    "meant": "mean", "spent": "spend", "fed": "feed", "chose": "choose",
    "chosen": "choose", "slid": "slide", "swung": "swing", "hung": "hang",
    "clung": "cling", "flung": "fling", "sprang": "spring",
    "sprung": "spring", "stole": "steal", "stolen": "steal",
    "understood": "understand", "ground": "grind",
    "bore": "bear", "born": "bear", "borne": "bear", "swore": "swear",
    "laid": "lay", "lit": "light", "shot": "shoot",
}

# Modal auxiliaries are treated as function words, never tagged as verbs.
MODALS = frozenset({
    "will", "would", "can", "could", "shall", "should", "may", "might",
    "must",
})

# A token directly after one of these is treated as the head of a noun
# phrase, so it is not tagged as a verb even when it looks like one
# ("the scream", "his touch").
DETERMINER_BLOCKERS = frozenset({
    "the", "a", "an", "my", "your", "his", "her", "its", "our", "their",
    "every", "each",
})

# Same rule after a preposition ("of running water", "in the fall").
PREPOSITION_BLOCKERS = frozenset({
    "of", "in", "on", "at", "by", "with", "from", "into", "onto", "over",
    "under", "through", "between", "against", "during", "without", "within",
    "upon", "across", "toward", "towards", "behind", "beyond", "among",
    "along", "around", "about",
})


def lemmatize_verb(surface: str) -> str | None:
    """Map a token to a verb lemma, or None when no reading exists.

    Lookup order: modal exclusion, irregular table, exact lemma, then
    suffix stripping for -s/-es/-ies, -ed/-ied and -ing with consonant
    de-doubling and final-e restoration.
    """
    s = surface.casefold()
    if not s or not s[0].isalpha():
        return None
    if s in MODALS:
        return None
    if s in IRREGULAR_VERB_FORMS:
        return IRREGULAR_VERB_FORMS[s]
    if s in VERB_LEMMAS:
        return s

    candidates: list[str] = []
    if s.endswith("ies") and len(s) > 3:
        candidates.append(s[:-3] + "y")
    if s.endswith("es") and len(s) > 2:
        candidates.append(s[:-2])
    if s.endswith("s") and len(s) > 1:
        candidates.append(s[:-1])
    if s.endswith("ied") and len(s) > 3:
        candidates.append(s[:-3] + "y")
    if s.endswith("ed") and len(s) > 2:
        stem = s[:-2]
        candidates.append(stem)
        candidates.append(stem + "e")
        if len(stem) > 1 and stem[-1] == stem[-2]:
            candidates.append(stem[:-1])
    if s.endswith("ing") and len(s) > 3:
        stem = s[:-3]
        candidates.append(stem)
        candidates.append(stem + "e")
        if len(stem) > 1 and stem[-1] == stem[-2]:
            candidates.append(stem[:-1])

    for candidate in candidates:
        if candidate in VERB_LEMMAS:
            return candidate
    return None

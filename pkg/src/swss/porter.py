"""Porter suffix-stripping stemmer.

Implements the classic rule-based English stemmer, following the author's
frozen ANSI C version rather than the 1980 journal text. The differences
are deliberate and well known: "bli" -> "ble" replaces "abli" -> "able",
the "logi" -> "log" rule is added in step 2, and words of length one or
two are returned untouched. This is the variant that produces the
published sample vocabulary output (see tests/data/porter/), and the
conformance suite holds the implementation to 100% agreement with it.

Only lowercase ASCII letter sequences are stemmed; everything else passes
through unchanged apart from case folding.
"""

_VOWELS = "aeiou"

# Step 2 and 3 rule tables, dispatched on one character the way the
# reference implementation switches: step 2 on the penultimate letter,
# step 3 on the last. Order within a bucket matters ("entli" before "eli").
_STEP2_RULES = {
    "a": (("ational", "ate"), ("tional", "tion")),
    "c": (("enci", "ence"), ("anci", "ance")),
    "e": (("izer", "ize"),),
    "l": (("bli", "ble"), ("alli", "al"), ("entli", "ent"), ("eli", "e"), ("ousli", "ous")),
    "o": (("ization", "ize"), ("ation", "ate"), ("ator", "ate")),
    "s": (("alism", "al"), ("iveness", "ive"), ("fulness", "ful"), ("ousness", "ous")),
    "t": (("aliti", "al"), ("iviti", "ive"), ("biliti", "ble")),
    "g": (("logi", "log"),),
}

_STEP3_RULES = {
    "e": (("icate", "ic"), ("ative", ""), ("alize", "al")),
    "i": (("iciti", "ic"),),
    "l": (("ical", "ic"), ("ful", "")),
    "s": (("ness", ""),),
}

# Step 4 strips a final suffix when the remaining stem has measure > 1.
# "ion" additionally requires the stem to end in s or t.
_STEP4_SUFFIXES = {
    "a": ("al",),
    "c": ("ance", "ence"),
    "e": ("er",),
    "i": ("ic",),
    "l": ("able", "ible"),
    "n": ("ant", "ement", "ment", "ent"),
    "s": ("ism",),
    "t": ("ate", "iti"),
    "u": ("ous",),
    "v": ("ive",),
    "z": ("ize",),
}


class _Word:
    """Mutable stemming buffer.

    ``b`` holds the letters, ``k`` is the index of the last live letter,
    and ``j`` is the offset set by the most recent suffix test. The
    measure and shape helpers all follow the reference definitions.
    """

    __slots__ = ("b", "k", "j")

    def __init__(self, word: str):
        self.b = word
        self.k = len(word) - 1
        self.j = 0

    def cons(self, i: int) -> bool:
        ch = self.b[i]
        if ch in _VOWELS:
            return False
        if ch == "y":
            return i == 0 or not self.cons(i - 1)
        return True

    def m(self) -> int:
        # Number of vowel-consonant sequences in b[0..j].
        n = 0
        i = 0
        while i <= self.j and self.cons(i):
            i += 1
        while True:
            while True:
                if i > self.j:
                    return n
                if self.cons(i):
                    break
                i += 1
            n += 1
            while i <= self.j and self.cons(i):
                i += 1

    def vowel_in_stem(self) -> bool:
        return any(not self.cons(i) for i in range(self.j + 1))

    def doublec(self, i: int) -> bool:
        return i > 0 and self.b[i] == self.b[i - 1] and self.cons(i)

    def cvc(self, i: int) -> bool:
        # consonant-vowel-consonant ending at i, last consonant not w, x or y;
        # used to decide whether to restore a final e (cav(e), lov(e)).
        if i < 2 or not self.cons(i) or self.cons(i - 1) or not self.cons(i - 2):
            return False
        return self.b[i] not in "wxy"

    def ends(self, suffix: str) -> bool:
        length = len(suffix)
        if suffix[-1] != self.b[self.k] or length > self.k + 1:
            return False
        if self.b[self.k - length + 1 : self.k + 1] != suffix:
            return False
        self.j = self.k - length
        return True

    def set_to(self, s: str) -> None:
        self.b = self.b[: self.j + 1] + s
        self.k = self.j + len(s)

    def replace_if_measured(self, s: str) -> None:
        if self.m() > 0:
            self.set_to(s)


def _step1ab(w: _Word) -> None:
    # Plurals and -ed / -ing: caresses -> caress, ponies -> poni,
    # agreed -> agree, matting -> mat, mating -> mate.
    if w.b[w.k] == "s":
        if w.ends("sses"):
            w.k -= 2
        elif w.ends("ies"):
            w.set_to("i")
        elif w.b[w.k - 1] != "s":
            w.k -= 1
    if w.ends("eed"):
        if w.m() > 0:
            w.k -= 1
    elif (w.ends("ed") or w.ends("ing")) and w.vowel_in_stem():
        w.k = w.j
        if w.ends("at"):
            w.set_to("ate")
        elif w.ends("bl"):
            w.set_to("ble")
        elif w.ends("iz"):
            w.set_to("ize")
        elif w.doublec(w.k):
            if w.b[w.k - 1] not in "lsz":
                w.k -= 1
        elif w.m() == 1 and w.cvc(w.k):
            w.set_to("e")


def _step1c(w: _Word) -> None:
    # Terminal y -> i when the stem contains another vowel.
    if w.ends("y") and w.vowel_in_stem():
        w.b = w.b[: w.k] + "i"


def _step2(w: _Word) -> None:
    # Double suffixes to single ones: -ization -> -ize. The stem before
    # the suffix must have measure > 0.
    for suffix, replacement in _STEP2_RULES.get(w.b[w.k - 1], ()):
        if w.ends(suffix):
            w.replace_if_measured(replacement)
            return


def _step3(w: _Word) -> None:
    # -ic-, -full, -ness and friends, same strategy as step 2.
    for suffix, replacement in _STEP3_RULES.get(w.b[w.k], ()):
        if w.ends(suffix):
            w.replace_if_measured(replacement)
            return


def _step4(w: _Word) -> None:
    # Strip -ant, -ence, etc. in context <c>vcvc<v>.
    ch = w.b[w.k - 1]
    if ch == "o":
        if not (
            (w.ends("ion") and w.j >= 0 and w.b[w.j] in "st") or w.ends("ou")
        ):
            return
    else:
        for suffix in _STEP4_SUFFIXES.get(ch, ()):
            if w.ends(suffix):
                break
        else:
            return
    if w.m() > 1:
        w.k = w.j


def _step5(w: _Word) -> None:
    # Final -e removal when measure > 1, and -ll -> -l.
    w.j = w.k
    if w.b[w.k] == "e":
        a = w.m()
        if a > 1 or (a == 1 and not w.cvc(w.k - 1)):
            w.k -= 1
    if w.b[w.k] == "l" and w.doublec(w.k) and w.m() > 1:
        w.k -= 1


def stem(token: str) -> str:
    """Return the stem of ``token``, lowercased.

    Tokens that are not pure ASCII letter strings (numbers, punctuation,
    accented words) are returned lowercased but otherwise unchanged, as
    are words of length one or two.
    """
    if not token:
        raise ValueError("cannot stem an empty token")
    word = token.lower()
    if len(word) <= 2 or not (word.isascii() and word.isalpha()):
        return word
    w = _Word(word)
    _step1ab(w)
    _step1c(w)
    _step2(w)
    _step3(w)
    _step4(w)
    _step5(w)
    return w.b[: w.k + 1]

"""English Snowball (Porter2) stemmer.

Implements the published algorithm: http://snowball.tartarus.org/algorithms/english/stemmer.html
Words are lowercased first, so the output is idempotent: stem(stem(w)) == stem(w).

The regions R1/R2 are tracked as suffix strings of the working word and
updated alongside every edit, matching the behavior of the widely used
Python port of the reference implementation.
"""

from __future__ import annotations

_VOWELS = "aeiouy"
_DOUBLES = ("bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt")
_LI_ENDINGS = "cdeghkmnrt"

_SPECIAL = {
    "skis": "ski",
    "skies": "sky",
    "dying": "die",
    "lying": "lie",
    "tying": "tie",
    "idly": "idl",
    "gently": "gentl",
    "ugly": "ugli",
    "early": "earli",
    "only": "onli",
    "singly": "singl",
    "sky": "sky",
    "news": "news",
    "howe": "howe",
    "atlas": "atlas",
    "cosmos": "cosmos",
    "bias": "bias",
    "andes": "andes",
    "inning": "inning",
    "innings": "inning",
    "outing": "outing",
    "outings": "outing",
    "canning": "canning",
    "cannings": "canning",
    "herring": "herring",
    "herrings": "herring",
    "earring": "earring",
    "earrings": "earring",
    "proceed": "proceed",
    "proceeds": "proceed",
    "proceeded": "proceed",
    "proceeding": "proceed",
    "exceed": "exceed",
    "exceeds": "exceed",
    "exceeded": "exceed",
    "exceeding": "exceed",
    "succeed": "succeed",
    "succeeds": "succeed",
    "succeeded": "succeed",
    "succeeding": "succeed",
}

_STEP2_SUFFIXES = (
    "ization", "ational", "fulness", "ousness", "iveness", "tional",
    "biliti", "lessli", "entli", "ation", "alism", "aliti", "ousli",
    "iviti", "fulli", "enci", "anci", "abli", "izer", "ator", "alli",
    "bli", "ogi", "li",
)
_STEP3_SUFFIXES = (
    "ational", "tional", "alize", "icate", "iciti", "ative", "ical",
    "ness", "ful",
)
_STEP4_SUFFIXES = (
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent",
    "ism", "ate", "iti", "ous", "ive", "ize", "ion", "al", "er", "ic",
)


class _Word:
    """Working word plus its R1/R2 regions, kept in sync through edits."""

    __slots__ = ("word", "r1", "r2")

    def __init__(self, word: str):
        self.word = word
        if word.startswith(("gener", "arsen")):
            self.r1 = word[5:]
        elif word.startswith("commun"):
            self.r1 = word[6:]
        else:
            self.r1 = _region(word)
        self.r2 = _region(self.r1)

    def drop(self, count: int) -> None:
        self.word = self.word[:-count]
        self.r1 = self.r1[:-count]
        self.r2 = self.r2[:-count]

    def replace(self, suffix: str, replacement: str) -> None:
        """Replace a word-final suffix; regions shorter than it become empty."""
        size = len(suffix)
        self.word = self.word[:-size] + replacement
        self.r1 = self.r1[:-size] + replacement if len(self.r1) >= size else ""
        self.r2 = self.r2[:-size] + replacement if len(self.r2) >= size else ""


def _region(text: str) -> str:
    """The part after the first non-vowel that follows a vowel."""
    for i in range(1, len(text)):
        if text[i] not in _VOWELS and text[i - 1] in _VOWELS:
            return text[i + 1:]
    return ""


def _has_vowel(text: str) -> bool:
    return any(ch in _VOWELS for ch in text)


def _mark_consonant_ys(word: str) -> str:
    if word.startswith("y"):
        word = "Y" + word[1:]
    chars = list(word)
    for i in range(1, len(chars)):
        if chars[i] == "y" and chars[i - 1] in _VOWELS:
            chars[i] = "Y"
    return "".join(chars)


def _step0(w: _Word) -> None:
    for suffix in ("'s'", "'s", "'"):
        if w.word.endswith(suffix):
            w.drop(len(suffix))
            return


def _step1a(w: _Word) -> None:
    word = w.word
    if word.endswith("sses"):
        w.drop(2)
    elif word.endswith(("ied", "ies")):
        w.drop(2 if len(word) > 4 else 1)
    elif word.endswith(("us", "ss")):
        pass
    elif word.endswith("s"):
        if _has_vowel(word[:-2]):
            w.drop(1)


def _step1b(w: _Word) -> None:
    for suffix in ("eedly", "eed"):
        if w.word.endswith(suffix):
            if w.r1.endswith(suffix):
                w.replace(suffix, "ee")
            return
    for suffix in ("ingly", "edly", "ing", "ed"):
        if w.word.endswith(suffix):
            if not _has_vowel(w.word[: -len(suffix)]):
                return
            w.drop(len(suffix))
            word = w.word
            if word.endswith(("at", "bl", "iz")):
                w.word += "e"
                w.r1 += "e"
                if len(word) + 1 > 5 or len(w.r1) >= 3:
                    w.r2 += "e"
            elif word.endswith(_DOUBLES):
                w.drop(1)
            elif w.r1 == "" and _ends_short_syllable(word):
                w.word += "e"
                if w.r1:
                    w.r1 += "e"
                if w.r2:
                    w.r2 += "e"
            return


def _ends_short_syllable(word: str) -> bool:
    if (
        len(word) >= 3
        and word[-1] not in _VOWELS
        and word[-1] not in "wxY"
        and word[-2] in _VOWELS
        and word[-3] not in _VOWELS
    ):
        return True
    return len(word) == 2 and word[0] in _VOWELS and word[1] not in _VOWELS


def _step1c(w: _Word) -> None:
    if len(w.word) > 2 and w.word[-1] in "yY" and w.word[-2] not in _VOWELS:
        w.word = w.word[:-1] + "i"
        w.r1 = w.r1[:-1] + "i" if w.r1 else ""
        w.r2 = w.r2[:-1] + "i" if w.r2 else ""


def _step2(w: _Word) -> None:
    for suffix in _STEP2_SUFFIXES:
        if not w.word.endswith(suffix):
            continue
        if w.r1.endswith(suffix):
            if suffix == "tional":
                w.drop(2)
            elif suffix in ("enci", "anci", "abli"):
                w.word = w.word[:-1] + "e"
                w.r1 = w.r1[:-1] + "e" if w.r1 else ""
                w.r2 = w.r2[:-1] + "e" if w.r2 else ""
            elif suffix == "entli":
                w.drop(2)
            elif suffix in ("izer", "ization"):
                _replace_with_region_default(w, suffix, "ize", r2_default="")
            elif suffix in ("ational", "ation", "ator"):
                _replace_with_region_default(w, suffix, "ate", r2_default="e")
            elif suffix in ("alism", "aliti", "alli"):
                _replace_with_region_default(w, suffix, "al", r2_default="")
            elif suffix == "fulness":
                w.drop(4)
            elif suffix in ("ousli", "ousness"):
                _replace_with_region_default(w, suffix, "ous", r2_default="")
            elif suffix in ("iveness", "iviti"):
                _replace_with_region_default(w, suffix, "ive", r2_default="e")
            elif suffix in ("biliti", "bli"):
                _replace_with_region_default(w, suffix, "ble", r2_default="")
            elif suffix == "ogi":
                if w.word[-4] == "l":
                    w.drop(1)
            elif suffix in ("fulli", "lessli"):
                w.drop(2)
            elif suffix == "li":
                if w.word[-3] in _LI_ENDINGS:
                    w.drop(2)
        return


def _replace_with_region_default(w: _Word, suffix: str, replacement: str, r2_default: str) -> None:
    size = len(suffix)
    r1, r2 = w.r1, w.r2
    w.word = w.word[:-size] + replacement
    w.r1 = r1[:-size] + replacement if len(r1) >= size else ""
    w.r2 = r2[:-size] + replacement if len(r2) >= size else r2_default


def _step3(w: _Word) -> None:
    for suffix in _STEP3_SUFFIXES:
        if not w.word.endswith(suffix):
            continue
        if w.r1.endswith(suffix):
            if suffix == "tional":
                w.drop(2)
            elif suffix == "ational":
                _replace_with_region_default(w, suffix, "ate", r2_default="")
            elif suffix == "alize":
                w.drop(3)
            elif suffix in ("icate", "iciti", "ical"):
                _replace_with_region_default(w, suffix, "ic", r2_default="")
            elif suffix in ("ful", "ness"):
                w.drop(len(suffix))
            elif suffix == "ative":
                if w.r2.endswith(suffix):
                    w.drop(5)
        return


def _step4(w: _Word) -> None:
    for suffix in _STEP4_SUFFIXES:
        if not w.word.endswith(suffix):
            continue
        if w.r2.endswith(suffix):
            if suffix == "ion":
                if w.word[-4] in "st":
                    w.drop(3)
            else:
                w.drop(len(suffix))
        return


def _step5(w: _Word) -> None:
    if w.r2.endswith("l") and w.word[-2] == "l":
        w.word = w.word[:-1]
    elif w.r2.endswith("e"):
        w.word = w.word[:-1]
    elif w.r1.endswith("e"):
        word = w.word
        if len(word) >= 4 and (
            word[-2] in _VOWELS
            or word[-2] in "wxY"
            or word[-3] not in _VOWELS
            or word[-4] in _VOWELS
        ):
            w.word = word[:-1]


def stem(word: str) -> str:
    """Stem one English word (lowercased first)."""
    word = word.lower()
    if len(word) <= 2:
        return word
    if word in _SPECIAL:
        return _SPECIAL[word]
    word = word.replace("’", "'").replace("‘", "'").replace("‛", "'")
    if word.startswith("'"):
        word = word[1:]
    w = _Word(_mark_consonant_ys(word))
    _step0(w)
    _step1a(w)
    _step1b(w)
    _step1c(w)
    _step2(w)
    _step3(w)
    _step4(w)
    _step5(w)
    return w.word.replace("Y", "y")

"""Closed phrase grammar shared by the scene generator and the vocabulary."""

THING_COLORS = ("red", "blue", "green", "yellow", "purple", "orange", "white")
SIZE_WORDS = ("small", "large")
SHAPE_NOUNS = {"circle": "circles", "square": "squares", "triangle": "triangles"}
COUNT_WORDS = {2: "two", 3: "three"}
SPATIAL_WORDS = ("on", "at", "in", "the", "left", "right", "top", "bottom", "center")

# stuff noun -> (adjective, base RGB)
STUFF_KINDS = {
    "grass": ("green", (0.22, 0.55, 0.18)),
    "sky": ("blue", (0.45, 0.65, 0.95)),
    "sand": ("yellow", (0.85, 0.78, 0.50)),
    "road": ("gray", (0.45, 0.45, 0.47)),
}

UNK_TOKEN = "<unk>"


def grammar_tokens() -> list:
    tokens = [UNK_TOKEN]
    words = list(THING_COLORS)
    words += [adjective for adjective, _ in STUFF_KINDS.values()]
    words += list(SIZE_WORDS)
    for singular, plural in SHAPE_NOUNS.items():
        words += [singular, plural]
    words += list(STUFF_KINDS)
    words += list(COUNT_WORDS.values())
    words += list(SPATIAL_WORDS)
    for word in words:
        if word not in tokens:
            tokens.append(word)
    return tokens

PROGRAM_VERSION = "0.1.0"

# File related constants
CONFIG_PATH = "src/config.json"
GRAPH_SUFFIX = ".graph"
GRAMMAR_ENV_VAR = "KREYOL_GRAMMAR"

# CLI exit codes
EXIT_OK = 0
EXIT_GENERATION_ERROR = 1
EXIT_INPUT_ERROR = 2

# Tree notation markers
SUBSTITUTION_MARK = "↓"
FOOT_MARK = "*"
ANCHOR_MARK = "@"
EMPTY_TOKEN = "∅"
HYPHEN = "-"

# Named trees the generator relies on
NBAR_TREE = "nbar"
EPITHET_TREE = "epithete"
COMPLEMENT_TREE = "complement"
RELATIVE_TREE = "relative"
NAMED_DEFINITE_TREE = "det_nom_defini"

# (degree, plural) -> determiner tree
DETERMINER_TREES = {
    ("generique", False): "det_generique",
    ("indefini", False): "det_indefini",
    ("defini", False): "det_defini",
    ("defini", True): "det_defini_pl",
    ("demonstratif", False): "det_demonstratif",
    ("demonstratif", True): "det_demonstratif_pl",
}

ASPECT_TREES = {
    "zero": "asp_zero",
    "perfectif": "asp_perfectif",
    "imperfectif": "asp_imperfectif",
    "prospectif": "asp_prospectif",
}

TENSE_TREES = {
    "unmarked": "tps_unmarked",
    "passe": "tps_passe",
}

REQUIRED_TREES = (
    NBAR_TREE, EPITHET_TREE, COMPLEMENT_TREE, RELATIVE_TREE, NAMED_DEFINITE_TREE,
    *DETERMINER_TREES.values(), *ASPECT_TREES.values(), *TENSE_TREES.values(),
)

# TMA particles, tense always first
TENSE_MARKERS = {"unmarked": None, "passe": "té"}
ASPECT_MARKERS = {"zero": None, "perfectif": None, "imperfectif": "ka", "prospectif": "ké"}
TENSES = tuple(TENSE_MARKERS)
ASPECTS = tuple(ASPECT_MARKERS)
STATE_ASPECT = "zero"
DEFAULT_TENSE = "unmarked"
DEFAULT_PROCESS_ASPECT = "perfectif"

PROCESS = "proces"
STATE = "etat"

# Determination
DEGREES = ("generique", "indefini", "defini", "demonstratif")
DEFAULT_DEGREE = "generique"
PLURAL_DEGREES = {"defini", "demonstratif"}
INDEFINITE_MARKER = "an"
DEMONSTRATIVE_MARKER = "tala"
PLURAL_MARKER = "sé"

# Harmony (GEREC orthography)
HARMONY_CLASSES = ("a", "la", "an", "lan")
VOWEL_LETTERS = set("aeiouéèò")
NASAL_NUCLEI = set("aeo")

# Clitic elisions after a vowel-final word
ELISIONS = {"ou": "'w"}

# Generation
ANAPHOR_LEMMA = "i"
THIRD_PERSON = "3"
RELATIVE_GAP_FUNCTION = "objet"
ROLE_PRIORITY = ("agent", "patient", "recipient", "attribute", "possessor")
CIRCUMSTANT_TMA = ("unmarked", "perfectif")

# Role usages declared in the ROLES section
ACTANT = "actant"
CIRCUMSTANT = "circumstant"
MODIFIER = "modifier"
COMPLEMENT = "complement"
ROLE_USAGES = (ACTANT, CIRCUMSTANT, MODIFIER, COMPLEMENT)

# Frame kinds
COMPLETE = "complete"
RESTRICTED = "restricted"

# Lexicon flags
CLITIC_FLAG = "clitic"
HARM_OVERRIDE_FLAG = "harm-override"
LEXICON_FLAGS = {CLITIC_FLAG, HARM_OVERRIDE_FLAG}
LEXICAL_CATEGORIES = ("N", "Pred")

# Categories that must never mention temps
BELOW_TENSE_CATEGORIES = {"Pred", "Predbar", "Asp"}

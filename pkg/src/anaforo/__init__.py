"""anaforo: bilingual (Spanish/English) pronominal anaphora resolution and
pronoun translation over POS-tagged text."""

__version__ = "0.1.0"
RULE_TABLE_VERSION = 1

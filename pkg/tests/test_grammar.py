from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localner.grammar import (
    Capture,
    DepthExceeded,
    Evidence,
    GrammarSyntaxError,
    UnbalancedCapture,
    UnknownAttribute,
    UnknownGraph,
    UnknownType,
    apply_context_rules,
    apply_grammars,
    match_at,
    parse_grammar,
)
from localner.lexicon import compile_lexicon, parse_delaf_line
from localner.taxonomy import NEType
from localner.tokenizer import split_sentences, tokenize
from oracles import FAMILY_DICTIONARY, GrammarOracle, family_pair, match_signature

CAROLINE = "Caroline,.N+PR+Hum+Prénom:fs"


def grammar(text, taxonomy):
    return parse_grammar(text, taxonomy)


def test_trigger_rule_parses_with_capture(taxonomy):
    g = grammar("@graph Org\n'groupe' $org(<PRE>+) -> Organization {} evidence=external\n", taxonomy)
    (rule,) = g.graphs["Org"].rules
    assert rule.evidence is Evidence.EXTERNAL
    assert sum(isinstance(e, Capture) for e in rule.elements) == 1
    toks = tokenize("Le groupe Vivendi")
    (m,) = match_at(g, "Org", toks, 2, compile_lexicon([]))
    assert m.captures["org"].surface == "Vivendi"
    assert (m.entity_start, m.entity_end) == (4, 5)


def test_unknown_graph(taxonomy):
    with pytest.raises(UnknownGraph):
        grammar("@graph Person\n<N+PR+Prénom> :Surname -> Person\n", taxonomy)


def test_unknown_type(taxonomy):
    with pytest.raises(UnknownType):
        grammar("@graph X\n<PRE> -> Location.Planète\n", taxonomy)


def test_nested_type_parses(taxonomy):
    g = grammar("@graph X\n'Quai' <PRE>~ -> Location.Microtoponyme evidence=internal\n", taxonomy)
    assert g.graphs["X"].rules[0].output == NEType("Location", ("Microtoponyme",))


def test_syntax_error_has_line(taxonomy):
    with pytest.raises(GrammarSyntaxError) as info:
        grammar("@graph X\n<PRE> -> Person\n<PRE> ( -> Person\n", taxonomy)
    assert info.value.lineno == 3


def test_unbalanced_capture(taxonomy):
    with pytest.raises((UnbalancedCapture, GrammarSyntaxError)):
        grammar("@graph X\n$a(<PRE> -> Person\n", taxonomy)


def test_unbound_attribute_variable(taxonomy):
    with pytest.raises(GrammarSyntaxError):
        grammar("@graph X\n$a(<PRE>) -> Person {last_name=b}\n", taxonomy)


def test_attribute_outside_schema(taxonomy):
    with pytest.raises(UnknownAttribute):
        grammar("@graph X\n$a(<PRE>) -> Person {colour=a}\n", taxonomy)


def test_repeat_bound(taxonomy):
    with pytest.raises(GrammarSyntaxError):
        grammar("@graph X\n<PRE>+9 -> Person\n", taxonomy)


def test_person_graph_example(taxonomy):
    g = grammar("@graph Person\n<N+PR+Prénom> $last(<PRE>) -> Person {last_name=last}\n", taxonomy)
    lx = compile_lexicon([CAROLINE])
    toks = tokenize("Caroline Dupont")
    (m,) = match_at(g, "Person", toks, 0, lx)
    assert m.length == 3
    assert m.captures["last"].surface == "Dupont"
    assert match_at(g, "Person", tokenize("le groupe Dupont"), 2, lx) == []


def test_suffix_trigger_is_internal(config):
    toks = tokenize("Neuf Télécom")
    (m, *_) = match_at(config.grammar, "Organization", toks, 0, config.lexicon)
    assert (m.start, m.end) == (0, 3)
    assert m.evidence is Evidence.INTERNAL


def run(config, text):
    toks = tokenize(text)
    sents = split_sentences(toks)
    matches = apply_grammars(config.grammar, toks, sents, config.lexicon)
    return toks, sents, matches


def surfaces(toks, m):
    return "".join(t.surface for t in toks[m.entity_start:m.entity_end])


def test_external_evidence_wins(config):
    toks, _, matches = run(config, "la société Hugues Aircraft")
    (m,) = matches
    assert m.ne_type == NEType("Organization")
    assert m.evidence is Evidence.EXTERNAL
    assert surfaces(toks, m) == "Hugues Aircraft"


def test_outermost_only(config):
    toks, _, matches = run(config, "Le Quai d'Orsay se trouve à Paris")
    assert [(surfaces(toks, m), m.ne_type.label) for m in matches] == [
        ("Quai d'Orsay", "Location.Microtoponyme"),
        ("Paris", "Location.Capitale"),
    ]


def test_empty_input(config):
    assert apply_grammars(config.grammar, [], [], config.lexicon) == []


def test_context_rule_reclassifies(config):
    text = "Le Quai d'Orsay se trouve dans l'impossibilité d'affirmer que les rebelles sont partis."
    toks, sents, matches = run(config, text)
    out = apply_context_rules(config.grammar.context_rules, matches, toks, sents, config.lexicon, config.grammar)
    assert out[0].ne_type == NEType("Organization")
    assert out[0].evidence is Evidence.CONTEXT_RECLASSIFIED


def test_context_rule_needs_full_context(config):
    toks, sents, matches = run(config, "Le Quai d'Orsay se trouve à Paris")
    out = apply_context_rules(config.grammar.context_rules, matches, toks, sents, config.lexicon, config.grammar)
    assert out[0].ne_type == NEType("Location", ("Microtoponyme",))


def test_context_rule_is_sentence_bounded(config):
    toks, sents, matches = run(config, "Il vit près du Quai d'Orsay. Se trouve dans l'impossibilité de venir.")
    out = apply_context_rules(config.grammar.context_rules, matches, toks, sents, config.lexicon, config.grammar)
    assert out[0].ne_type.class_name == "Location"


def test_no_context_rules_is_identity(config):
    toks, sents, matches = run(config, "Le Quai d'Orsay se trouve dans l'impossibilité de venir")
    assert apply_context_rules([], matches, toks, sents, config.lexicon) == matches


def test_depth_cap(taxonomy):
    g = grammar("@subgraph R\n'a' :R\n'a'\n@graph Top\n:R -> Person\n", taxonomy)
    toks = tokenize(" ".join(["a"] * 100))
    with pytest.raises(DepthExceeded):
        match_at(g, "Top", toks, 0, compile_lexicon([]))
    assert match_at(g, "Top", tokenize("a a a"), 0, compile_lexicon([]))[0].end == 5


def test_results_sorted(config):
    toks = tokenize("Jean Paris")
    ms = match_at(config.grammar, "Person", toks, 0, config.lexicon)
    keys = [(-m.length, m.rule.priority) for m in ms]
    assert keys == sorted(keys)


# -- properties ----------------------------------------------------------------

FAMILY_LEXICON = compile_lexicon(FAMILY_DICTIONARY)
FAMILY_ENTRIES = [parse_delaf_line(line) for line in FAMILY_DICTIONARY]


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_matcher_agrees_with_expansion_oracle(seed, taxonomy):
    _, g, toks = family_pair(random.Random(seed), taxonomy)
    oracle = GrammarOracle(g, FAMILY_ENTRIES, toks)
    for i in range(len(toks)):
        assert match_signature(match_at(g, "G0", toks, i, FAMILY_LEXICON)) == oracle.match("G0", i)


CORPUS_WORDS = ["Le", "le", "groupe", "Vivendi", "Quai", "d'Orsay", "se", "trouve", "dans", "l'impossibilité",
                "à", "Paris", "Laurent", "Gbagbo", ".", "12", "mai", "société", "Neuf", "Télécom", "a", "déclaré"]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(CORPUS_WORDS), max_size=30))
def test_matches_disjoint_sorted_and_spans_kept(config, words):
    text = " ".join(words)
    toks, sents, matches = run(config, text)
    for a, b in zip(matches, matches[1:]):
        assert a.end <= b.start
    for m in matches:
        assert m.start < m.end
        assert m.start <= m.entity_start < m.entity_end <= m.end
        for c in m.captures.values():
            assert m.start <= c.start < c.end <= m.end
    out = apply_context_rules(config.grammar.context_rules, matches, toks, sents, config.lexicon, config.grammar)
    assert [(m.start, m.end) for m in out] == [(m.start, m.end) for m in matches]
    assert [m.captures for m in out] == [m.captures for m in matches]
    assert run(config, text)[2] == matches

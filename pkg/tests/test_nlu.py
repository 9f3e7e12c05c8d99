import json

import httpx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from talkcoach.nlu import (
    Intent,
    Interpretation,
    Polarity,
    RemoteInterpreter,
    RuleBasedInterpreter,
    extract_name,
    missing_env,
)


@pytest.fixture(scope="module")
def nlu():
    return RuleBasedInterpreter()


class TestInterpret:
    def test_yes_with_frequency_entity(self, nlu):
        result = nlu.interpret("yes I work out daily", expected=["exercises"])
        assert result.intent is Intent.YES_REPLY
        assert result.entities["exercises"] == "daily"

    def test_question_mark_means_question(self, nlu):
        assert nlu.interpret("Where are you from?").intent is Intent.QUESTION

    def test_wh_opener_without_punctuation_is_question(self, nlu):
        assert nlu.interpret("where are you from").intent is Intent.QUESTION

    def test_garbled_input_is_unclear_with_no_entities(self, nlu):
        result = nlu.interpret("ζψ## noise ωω λλ", expected=["origin_place"])
        assert result.intent is Intent.UNCLEAR
        assert result.entities == {}

    def test_empty_input_unclear(self, nlu):
        assert nlu.interpret("").intent is Intent.UNCLEAR
        assert nlu.interpret("   ").intent is Intent.UNCLEAR

    def test_no_reply(self, nlu):
        assert nlu.interpret("nope, not really my thing").intent is Intent.NO_REPLY

    def test_request_detail(self, nlu):
        assert nlu.interpret("sure, show me the metrics").intent is Intent.REQUEST_DETAIL

    def test_plain_statement_is_answer(self, nlu):
        assert nlu.interpret("I grew up near the coast").intent is Intent.ANSWER

    def test_negative_polarity(self, nlu):
        result = nlu.interpret("I have been really sad and stressed lately")
        assert result.polarity is Polarity.NEGATIVE

    def test_positive_polarity(self, nlu):
        assert nlu.interpret("it was an amazing wonderful trip").polarity is Polarity.POSITIVE

    def test_topic_cues(self, nlu):
        result = nlu.interpret("we took a vacation and watched movies on the flight")
        assert result.topic_cues == {"travel", "entertainment"}

    def test_place_entity(self, nlu):
        result = nlu.interpret("I'm from Austria originally", expected=["origin_place"])
        assert result.entities["origin_place"] == "Austria"

    def test_generic_fallback_strips_lead_fillers(self, nlu):
        result = nlu.interpret("well, um, mostly jazz these days", expected=["favorite_genre"])
        assert result.entities["favorite_genre"] == "mostly jazz these days"

    def test_question_carries_topic_for_persona_lookup(self, nlu):
        result = nlu.interpret("Where are you from?")
        assert "where are you from" in result.entities["question_topic"]

    def test_entity_values_derive_from_input(self, nlu):
        text = "yes I love hiking in Norway every week"
        result = nlu.interpret(text, expected=["origin_place", "exercises"])
        for value in result.entities.values():
            assert value.lower() in text.lower()

    @given(st.text(max_size=300))
    @settings(max_examples=150, deadline=None)
    def test_total_over_arbitrary_unicode(self, text):
        nlu = RuleBasedInterpreter()
        result = nlu.interpret(text, expected=["origin_place"])
        assert isinstance(result, Interpretation)

    def test_total_over_long_inputs(self, nlu):
        for chunk in ("a? ", "ζψ# ", "yes I work out daily "):
            long_text = chunk * 6000  # comfortably past the input cap
            assert isinstance(nlu.interpret(long_text, expected=["exercises"]), Interpretation)

    def test_deterministic(self, nlu):
        a = nlu.interpret("yes I love the beach", expected=["dream_destination"])
        b = nlu.interpret("yes I love the beach", expected=["dream_destination"])
        assert a == b


class TestExtractName:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("my name is Victoria", "Victoria"),
            ("Max", "Max"),
            ("I'm rhea", "Rhea"),
            ("call me Ish", "Ish"),
            ("it's Yella!", "Yella"),
            ("My NAME is HARRY", "Harry"),
        ],
    )
    def test_positive_patterns(self, text, expected):
        assert extract_name(text) == expected

    @pytest.mark.parametrize(
        "text",
        [
            "i won't say",
            "none of your business",
            "I'd rather not say",
            "no",
            "what is yours?",
            "",
            "I am not telling you",
        ],
    )
    def test_negative_patterns(self, text):
        assert extract_name(text) is None


class TestUnclearInvariant:
    def test_unclear_forbids_entities(self):
        with pytest.raises(ValueError):
            Interpretation(Intent.UNCLEAR, entities={"x": "y"})


class TestRemoteAdapter:
    def test_missing_env_vars_reported(self, monkeypatch):
        for name in RemoteInterpreter.ENV_VARS:
            monkeypatch.delenv(name, raising=False)
        with pytest.raises(RuntimeError) as err:
            RemoteInterpreter()
        for name in RemoteInterpreter.ENV_VARS:
            assert name in str(err.value)

    def _env(self, monkeypatch):
        monkeypatch.setenv("TALKCOACH_LLM_BASE_URL", "https://llm.example/v1")
        monkeypatch.setenv("TALKCOACH_LLM_MODEL", "test-model")
        monkeypatch.setenv("TALKCOACH_LLM_API_KEY", "sk-test")

    def test_remote_result_used_when_well_formed(self, monkeypatch):
        self._env(monkeypatch)

        def handler(request):
            content = json.dumps(
                {
                    "intent": "yes_reply",
                    "polarity": "positive",
                    "entities": {"exercises": "daily"},
                    "topic_cues": ["health"],
                }
            )
            return httpx.Response(200, json={"choices": [{"message": {"content": content}}]})

        remote = RemoteInterpreter(transport=httpx.MockTransport(handler))
        result = remote.interpret("yes I work out daily", expected=["exercises"])
        assert result.intent is Intent.YES_REPLY
        assert result.entities == {"exercises": "daily"}
        assert result.topic_cues == {"health"}

    def test_transport_failure_falls_back_to_rules(self, monkeypatch, caplog):
        self._env(monkeypatch)

        def handler(request):
            raise httpx.ConnectTimeout("boom")

        remote = RemoteInterpreter(transport=httpx.MockTransport(handler))
        with caplog.at_level("WARNING"):
            result = remote.interpret("yes I work out daily", expected=["exercises"])
        assert result.intent is Intent.YES_REPLY  # rule-based fallback
        assert any("fallback" in r.message for r in caplog.records)

    def test_same_shape_as_rule_based(self, monkeypatch):
        self._env(monkeypatch)

        def handler(request):
            return httpx.Response(500)

        remote = RemoteInterpreter(transport=httpx.MockTransport(handler))
        rule = RuleBasedInterpreter().interpret("Where are you from?")
        fell_back = remote.interpret("Where are you from?")
        assert fell_back == rule


def test_missing_env_helper(monkeypatch):
    monkeypatch.delenv("TALKCOACH_X", raising=False)
    monkeypatch.setenv("TALKCOACH_Y", "1")
    assert missing_env(["TALKCOACH_X", "TALKCOACH_Y"]) == ["TALKCOACH_X"]

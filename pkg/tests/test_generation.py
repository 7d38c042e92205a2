"""Backend orchestration: retries, truncation, mock bank, and pipelines."""

import math

import pytest
import requests

import kurosawa.generation as generation
from kurosawa.errors import (
    BackendRejectedError,
    BackendTimeoutError,
    BackendUnavailableError,
    ContextOverflowError,
    GenresForbiddenError,
    GenresRequiredError,
)
from kurosawa.generation import (
    DEFAULT_CONTEXT_LIMIT,
    MOCK_LOGPROB,
    RETRY_ATTEMPTS,
    CompletionBackend,
    GenerationConfig,
    GenerationResult,
    HttpBackend,
    MockBackend,
    complete,
    estimate_tokens,
    generate_plot,
    generate_scene,
    mock_complete,
)
from kurosawa.metrics import perplexity
from kurosawa.plots import STOP_SEQUENCE, GenerationProfile, parse_acts

STORYLINE = " ".join(f"beat{i}" for i in range(20))

ALL_FIXTURES = {
    "plot_valid_long", "plot_valid_short", "plot_missing_tag",
    "plot_duplicate_tag", "plot_out_of_order", "plot_empty_act",
    "scene_valid_restaurant", "scene_valid_lab", "scene_stray_text",
    "scene_unbalanced", "scene_empty_element", "scene_orphan_dialogue",
    "empty_output",
}


class StubBackend:
    """Scripted backend: yields queued results or raises queued errors."""

    identity = "stub"
    supports_logprobs = False

    def __init__(self, script, context_limit=DEFAULT_CONTEXT_LIMIT):
        self.script = list(script)
        self.context_limit = context_limit
        self.calls = 0

    def complete_raw(self, prompt, config):
        self.calls += 1
        step = self.script.pop(0)
        if isinstance(step, Exception):
            raise step
        return step


def result(text, logprobs=None, truncated=False):
    return GenerationResult(
        text=text, backend_id="stub:1", elapsed_ms=3,
        token_logprobs=logprobs, truncated=truncated,
    )


class TestConfig:
    def test_defaults(self):
        config = GenerationConfig()
        assert config.temperature == 0.7
        assert config.top_p == 1.0
        assert config.frequency_penalty == 0.1
        assert config.presence_penalty == 0.1
        assert config.max_tokens == 900
        assert config.stop == (STOP_SEQUENCE,)
        assert config.model_ref == ""

    @pytest.mark.parametrize("kwargs", [
        {"temperature": -0.1},
        {"top_p": 0.0},
        {"top_p": 1.5},
        {"max_tokens": 0},
    ])
    def test_invalid_values_rejected(self, kwargs):
        with pytest.raises(ValueError):
            GenerationConfig(**kwargs)

    def test_stop_list_coerced_to_tuple(self):
        assert GenerationConfig(stop=["a", "b"]).stop == ("a", "b")

    def test_dict_shape(self):
        d = GenerationConfig().to_dict()
        assert d["stop"] == [STOP_SEQUENCE]
        assert set(d) == {
            "temperature", "top_p", "frequency_penalty",
            "presence_penalty", "max_tokens", "stop", "model_ref",
        }


class TestResult:
    def test_negative_elapsed_rejected(self):
        with pytest.raises(ValueError):
            result("x").__class__(text="x", backend_id="b", elapsed_ms=-1)

    def test_positive_logprob_rejected(self):
        with pytest.raises(ValueError):
            result("x", logprobs=(0.1,))

    def test_logprob_list_coerced(self):
        assert result("x", logprobs=[-0.5]).token_logprobs == (-0.5,)

    def test_dict_shape(self):
        d = result("x", logprobs=(-1.0,)).to_dict()
        assert d == {
            "text": "x", "backend_id": "stub:1", "elapsed_ms": 3,
            "token_logprobs": [-1.0], "truncated": False,
        }


class TestEstimate:
    @pytest.mark.parametrize("text,tokens", [
        ("", 0), ("a", 1), ("abcd", 1), ("abcde", 2), ("x" * 4096, 1024),
    ])
    def test_four_chars_per_token_rounded_up(self, text, tokens):
        assert estimate_tokens(text) == tokens


class TestComplete:
    def test_blank_prompt_rejected(self):
        with pytest.raises(ValueError):
            complete(StubBackend([]), "   ")

    def test_context_overflow(self):
        # 4596 chars estimate to 1149 tokens; 1149 + 900 > 2048
        with pytest.raises(ContextOverflowError) as excinfo:
            complete(StubBackend([]), "x" * 4596)
        assert excinfo.value.detail() == {"estimated": 2049, "limit": 2048}

    def test_context_boundary_is_inclusive(self):
        # 4592 chars estimate to 1148 tokens; 1148 + 900 == 2048 fits
        backend = StubBackend([result("ok")])
        assert complete(backend, "x" * 4592).text == "ok"

    def test_transport_errors_retry_with_backoff(self, monkeypatch):
        delays = []
        monkeypatch.setattr(generation, "_sleep", delays.append)
        backend = StubBackend([
            BackendUnavailableError("down"),
            BackendTimeoutError("slow"),
            result("third time lucky"),
        ])
        assert complete(backend, "p").text == "third time lucky"
        assert backend.calls == 3
        assert delays == [0.5, 1.0]

    def test_retries_exhaust(self, monkeypatch):
        monkeypatch.setattr(generation, "_sleep", lambda s: None)
        backend = StubBackend([BackendUnavailableError("down")] * 5)
        with pytest.raises(BackendUnavailableError):
            complete(backend, "p")
        assert backend.calls == RETRY_ATTEMPTS

    def test_rejection_is_final(self, monkeypatch):
        monkeypatch.setattr(generation, "_sleep", lambda s: None)
        backend = StubBackend([BackendRejectedError(400, "bad")] * 2)
        with pytest.raises(BackendRejectedError):
            complete(backend, "p")
        assert backend.calls == 1

    def test_cuts_at_earliest_stop(self):
        backend = StubBackend([result("abc THERE def HERE tail")])
        config = GenerationConfig(stop=("HERE", "THERE"))
        assert complete(backend, "p", config).text == "abc "

    def test_truncated_by_logprob_count(self):
        backend = StubBackend([result("a b c", logprobs=(-1.0,) * 3)])
        config = GenerationConfig(max_tokens=3)
        assert complete(backend, "p", config).truncated is True

    def test_truncated_by_estimate_when_no_logprobs(self):
        backend = StubBackend([result("x" * 400)])
        config = GenerationConfig(max_tokens=100)
        assert complete(backend, "p", config).truncated is True

    def test_stop_beats_truncation(self):
        backend = StubBackend([result("body" + STOP_SEQUENCE + "overrun",
                                      logprobs=(-1.0,) * 50)])
        config = GenerationConfig(max_tokens=5)
        out = complete(backend, "p", config)
        assert out.text == "body"
        assert out.truncated is False

    def test_untouched_result_passes_through(self):
        raw = result("short and clean")
        backend = StubBackend([raw])
        assert complete(backend, "p") is raw


class TestMockBackend:
    def test_protocol_conformance(self):
        assert isinstance(MockBackend(), CompletionBackend)

    def test_same_inputs_same_fixture(self):
        a = MockBackend(seed=11).complete_raw("prompt", GenerationConfig())
        b = MockBackend(seed=11).complete_raw("prompt", GenerationConfig())
        assert a == b

    def test_seed_changes_selection(self):
        picks = {
            MockBackend(seed=s).complete_raw("prompt", GenerationConfig()).backend_id
            for s in range(20)
        }
        assert len(picks) > 1

    def test_pin_forces_fixture(self):
        out = MockBackend(pin="scene_valid_lab").complete_raw("anything", GenerationConfig())
        assert out.backend_id == "mock:scene_valid_lab"
        assert out.text.startswith("<bsl> INT. LAB - NIGHT <esl>")

    def test_unknown_pin_rejected(self):
        with pytest.raises(KeyError):
            MockBackend(pin="missing").complete_raw("p", GenerationConfig())

    def test_bank_contents(self):
        assert set(MockBackend().fixture_names()) == ALL_FIXTURES

    def test_logprobs_are_uniform_quarter(self):
        out = MockBackend(pin="plot_valid_short").complete_raw("p", GenerationConfig())
        assert set(out.token_logprobs) == {MOCK_LOGPROB}
        assert len(out.token_logprobs) == len(out.text.split())
        assert perplexity(list(out.token_logprobs)) == pytest.approx(4.0)

    def test_custom_bank_dir(self, tmp_path):
        (tmp_path / "index.json").write_text(
            '{"fixtures": [{"name": "only", "kind": "plot", "file": "only.txt"}]}',
            encoding="utf-8",
        )
        (tmp_path / "only.txt").write_text("hello", encoding="utf-8")
        backend = MockBackend(bank_dir=tmp_path)
        assert backend.fixture_names() == ["only"]
        assert backend.complete_raw("p", GenerationConfig()).text == "hello"

    def test_empty_bank_rejected(self, tmp_path):
        (tmp_path / "index.json").write_text('{"fixtures": []}', encoding="utf-8")
        with pytest.raises(ValueError):
            MockBackend(bank_dir=tmp_path)

    def test_mock_complete_helper(self):
        assert mock_complete("p", seed=3) == MockBackend(seed=3).complete_raw(
            "p", GenerationConfig())


class FakeResponse:
    def __init__(self, status_code=200, body=None, text=""):
        self.status_code = status_code
        self._body = body
        self.text = text

    def json(self):
        if self._body is None:
            raise ValueError("not json")
        return self._body


class TestHttpBackend:
    def post_stub(self, monkeypatch, outcome):
        captured = {}

        def fake_post(url, json=None, headers=None, timeout=None):
            captured.update(url=url, json=json, headers=headers, timeout=timeout)
            if isinstance(outcome, Exception):
                raise outcome
            return outcome

        monkeypatch.setattr(requests, "post", fake_post)
        return captured

    def test_blank_url_rejected(self):
        with pytest.raises(ValueError):
            HttpBackend(url="")

    def test_from_env(self):
        with pytest.raises(ValueError):
            HttpBackend.from_env({})
        backend = HttpBackend.from_env({
            "KUROSAWA_BACKEND_URL": "http://model.test/v1",
            "KUROSAWA_BACKEND_TOKEN": "tok",
            "KUROSAWA_MODEL_REF": "ft-7",
        })
        assert (backend.url, backend.token, backend.model_ref) == (
            "http://model.test/v1", "tok", "ft-7")

    def test_payload_prefers_config_model(self):
        backend = HttpBackend(url="http://x", model_ref="base")
        assert backend._payload("p", GenerationConfig())["model"] == "base"
        assert backend._payload("p", GenerationConfig(model_ref="ft"))["model"] == "ft"

    def test_choices_response(self, monkeypatch):
        body = {"choices": [{"text": " out", "logprobs": {"token_logprobs": [-0.5, -0.25]}}]}
        captured = self.post_stub(monkeypatch, FakeResponse(body=body))
        backend = HttpBackend(url="http://model.test", token="tok")
        out = backend.complete_raw("p", GenerationConfig())
        assert out.text == " out"
        assert out.token_logprobs == (-0.5, -0.25)
        assert out.backend_id == "http:http://model.test"
        assert captured["headers"]["Authorization"] == "Bearer tok"
        assert captured["json"]["prompt"] == "p"
        assert captured["json"]["logprobs"] is True
        assert captured["json"]["stop"] == [STOP_SEQUENCE]

    def test_flat_response_without_logprobs(self, monkeypatch):
        self.post_stub(monkeypatch, FakeResponse(body={"text": "flat"}))
        out = HttpBackend(url="http://x").complete_raw("p", GenerationConfig())
        assert out.text == "flat"
        assert out.token_logprobs is None

    def test_no_auth_header_without_token(self, monkeypatch):
        captured = self.post_stub(monkeypatch, FakeResponse(body={"text": "t"}))
        HttpBackend(url="http://x").complete_raw("p", GenerationConfig())
        assert "Authorization" not in captured["headers"]

    @pytest.mark.parametrize("body", [
        {"choices": []},
        {"choices": [{}]},
        {"unrelated": 1},
    ])
    def test_malformed_payload_rejected(self, monkeypatch, body):
        self.post_stub(monkeypatch, FakeResponse(body=body))
        with pytest.raises(BackendRejectedError):
            HttpBackend(url="http://x").complete_raw("p", GenerationConfig())

    def test_non_json_rejected(self, monkeypatch):
        self.post_stub(monkeypatch, FakeResponse(body=None, text="<html>"))
        with pytest.raises(BackendRejectedError):
            HttpBackend(url="http://x").complete_raw("p", GenerationConfig())

    @pytest.mark.parametrize("status", [500, 503])
    def test_server_errors_mean_unavailable(self, monkeypatch, status):
        self.post_stub(monkeypatch, FakeResponse(status_code=status))
        with pytest.raises(BackendUnavailableError):
            HttpBackend(url="http://x").complete_raw("p", GenerationConfig())

    def test_client_error_means_rejected(self, monkeypatch):
        self.post_stub(monkeypatch, FakeResponse(status_code=400, text="bad prompt"))
        with pytest.raises(BackendRejectedError) as excinfo:
            HttpBackend(url="http://x").complete_raw("p", GenerationConfig())
        assert excinfo.value.detail()["status"] == 400

    def test_timeout_maps_to_timeout_error(self, monkeypatch):
        self.post_stub(monkeypatch, requests.Timeout("slow"))
        with pytest.raises(BackendTimeoutError):
            HttpBackend(url="http://x").complete_raw("p", GenerationConfig())

    def test_connection_error_means_unavailable(self, monkeypatch):
        self.post_stub(monkeypatch, requests.ConnectionError("refused"))
        with pytest.raises(BackendUnavailableError):
            HttpBackend(url="http://x").complete_raw("p", GenerationConfig())

    def test_ping(self, monkeypatch):
        monkeypatch.setattr(requests, "head", lambda url, timeout: None)
        assert HttpBackend(url="http://x").ping() is True

        def refuse(url, timeout):
            raise requests.ConnectionError("refused")

        monkeypatch.setattr(requests, "head", refuse)
        assert HttpBackend(url="http://x").ping() is False


class TestGeneratePlot:
    def run(self, pin, profile=GenerationProfile.AS, genres=(), storyline=STORYLINE,
            config=None):
        backend = MockBackend(pin=pin)
        return generate_plot(storyline, list(genres), profile, backend, config)

    def test_valid_plot_parses_clean(self):
        gen = self.run("plot_valid_long")
        assert gen.report.ok
        assert gen.report.warnings == []
        assert gen.acts is not None
        assert gen.acts == parse_acts(gen.raw.text)

    def test_malformed_plot_reports_and_skips_parse(self):
        gen = self.run("plot_missing_tag")
        assert gen.acts is None
        assert "MissingTag" in [e.code for e in gen.report.errors]

    def test_short_plot_warns_on_band(self):
        gen = self.run("plot_valid_short")
        assert gen.acts is not None
        assert "LengthOutOfRange" in [w.code for w in gen.report.warnings]

    def test_profile_o_skips_act_parse(self):
        gen = self.run("plot_valid_long", profile=GenerationProfile.O)
        assert gen.acts is None
        assert gen.report.ok

    def test_storyline_band_warning_travels(self):
        gen = self.run("plot_valid_long", storyline="too short")
        codes = [w.code for w in gen.report.warnings]
        assert "LengthViolation" in codes

    def test_genre_profile_requires_genres(self):
        with pytest.raises(GenresRequiredError):
            self.run("plot_valid_long", profile=GenerationProfile.ASG)

    def test_plain_profile_forbids_genres(self):
        with pytest.raises(GenresForbiddenError):
            self.run("plot_valid_long", genres=("Drama",))

    def test_genre_profile_accepts_genres(self):
        gen = self.run("plot_valid_long", profile=GenerationProfile.ASG,
                       genres=("Drama", "Comedy"))
        assert gen.acts is not None

    def test_truncation_warning(self):
        gen = self.run("plot_valid_short", config=GenerationConfig(max_tokens=5))
        assert gen.raw.truncated
        assert "Truncated" in [w.code for w in gen.report.warnings]

    def test_dict_shape(self):
        d = self.run("plot_valid_long").to_dict()
        assert set(d) == {"raw", "acts", "report"}
        assert d["acts"]["one"]


class TestGenerateScene:
    def run(self, pin, description=STORYLINE, config=None):
        return generate_scene(description, MockBackend(pin=pin), config)

    def test_blank_description_rejected(self):
        with pytest.raises(ValueError):
            generate_scene("  ", MockBackend())

    def test_valid_scene_decodes_clean(self):
        gen = self.run("scene_valid_restaurant")
        assert gen.report.ok
        assert gen.report.warnings == []
        assert gen.scene is not None
        assert len(gen.scene.elements) == 10

    def test_description_band_warning(self):
        gen = self.run("scene_valid_restaurant", description="too short")
        warning = gen.report.warnings[0]
        assert warning.code == "LengthViolation"
        assert warning.detail["what"] == "description"

    def test_short_scene_warns_on_band(self):
        gen = self.run("scene_valid_lab")
        codes = [w.code for w in gen.report.warnings]
        assert "LengthOutOfRange" in codes
        assert gen.scene is not None

    def test_stray_text_is_lenient(self):
        gen = self.run("scene_stray_text")
        assert gen.scene is not None
        assert "StrayText" in [w.code for w in gen.report.warnings]

    def test_unbalanced_is_fatal(self):
        gen = self.run("scene_unbalanced")
        assert gen.scene is None
        assert "UnbalancedTags" in [e.code for e in gen.report.errors]

    def test_empty_element_warns(self):
        gen = self.run("scene_empty_element")
        assert "EmptyElement" in [w.code for w in gen.report.warnings]

    def test_orphan_dialogue_warns(self):
        gen = self.run("scene_orphan_dialogue")
        assert "OrphanDialogue" in [w.code for w in gen.report.warnings]

    def test_empty_output_reports_empty_scene_only(self):
        gen = self.run("empty_output")
        assert gen.report.errors == []
        assert [w.code for w in gen.report.warnings] == ["EmptyScene"]

    def test_dict_shape(self):
        d = self.run("scene_valid_lab").to_dict()
        assert set(d) == {"raw", "scene", "report"}
        assert d["scene"]["elements"][0]["kind"] == "slugline"


def test_mock_logprob_constant():
    assert MOCK_LOGPROB == math.log(0.25)

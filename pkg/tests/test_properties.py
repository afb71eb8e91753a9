"""Property tests for the pure-function invariants (hypothesis)."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from voxmod._kernels import pure
from voxmod.features import FeatureMatrix, quartile_aggregate
from voxmod.text.transcript import Transcript, Word, low_confidence_spans, normalize_text
from voxmod.text.wer import compute_wer

words = st.text(alphabet="abcdefg", min_size=0, max_size=8)
short_word_lists = st.lists(st.sampled_from(["a", "b", "c"]), min_size=0, max_size=6)


class TestLevenshteinAxioms:
    @given(words, words)
    def test_symmetry(self, a, b):
        assert pure.levenshtein(a, b) == pure.levenshtein(b, a)

    @given(words, words)
    def test_zero_iff_equal(self, a, b):
        assert (pure.levenshtein(a, b) == 0) == (a == b)

    @given(words, words, words)
    def test_triangle_inequality(self, a, b, c):
        assert pure.levenshtein(a, c) <= pure.levenshtein(a, b) + pure.levenshtein(b, c)

    @given(words, words, st.integers(min_value=0, max_value=10))
    def test_bounded_consistent_with_unbounded(self, a, b, limit):
        d = pure.levenshtein(a, b)
        bounded = pure.bounded_levenshtein(a, b, limit)
        assert bounded == (d if d <= limit else limit + 1)


class TestWerProperties:
    @given(short_word_lists.filter(bool), short_word_lists)
    def test_errors_equal_word_level_edit_distance(self, ref, hyp):
        result = compute_wer(ref, hyp)
        joined_ref = "".join(ref)
        joined_hyp = "".join(hyp)
        assert result.errors == pure.levenshtein(joined_ref, joined_hyp)
        assert result.wer == result.errors / len(ref)

    @given(short_word_lists.filter(bool))
    def test_identity_gives_zero(self, ref):
        assert compute_wer(ref, list(ref)).wer == 0.0

    @given(short_word_lists.filter(bool))
    def test_empty_hypothesis_is_all_deletions(self, ref):
        result = compute_wer(ref, [])
        assert result.deletions == len(ref)
        assert result.wer == 1.0


class TestQuartileProperties:
    series = st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=40
    )

    @settings(max_examples=60)
    @given(series)
    def test_monotone_and_bounded(self, values):
        matrix = FeatureMatrix(values=np.tile(values, (34, 1)), clip_id="h")
        q = quartile_aggregate(matrix).values.reshape(34, 4)[0]
        assert q[0] <= q[1] <= q[2] <= q[3]
        assert min(values) <= q[0]
        assert q[3] == max(values)

    @settings(max_examples=60)
    @given(series, st.randoms(use_true_random=False))
    def test_permutation_invariance(self, values, rand):
        shuffled = list(values)
        rand.shuffle(shuffled)
        a = quartile_aggregate(FeatureMatrix(values=np.tile(values, (34, 1)), clip_id="x")).values
        b = quartile_aggregate(FeatureMatrix(values=np.tile(shuffled, (34, 1)), clip_id="x")).values
        assert np.array_equal(a, b)


class TestNormalizeProperties:
    any_text = st.text(max_size=60)

    @given(any_text)
    def test_idempotent(self, text):
        once = normalize_text(text)
        assert normalize_text(once) == once

    @given(any_text)
    def test_no_double_spaces_or_uppercase(self, text):
        out = normalize_text(text)
        assert "  " not in out
        assert out == out.lower()
        assert out == out.strip()


class TestSpanProperties:
    confidences = st.lists(
        st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=1, max_size=20
    )

    @given(confidences, st.floats(min_value=0.0, max_value=1.0))
    def test_spans_are_exactly_the_low_words(self, confs, threshold):
        transcript = Transcript(words=tuple(Word(f"w{i}", c) for i, c in enumerate(confs)))
        spans = low_confidence_spans(transcript, threshold)
        covered = {i for start, end in spans for i in range(start, end + 1)}
        expected = {i for i, c in enumerate(confs) if c < threshold}
        assert covered == expected
        # maximality: spans never touch (a shared boundary would merge them)
        flat = sorted(spans)
        for (s1, e1), (s2, e2) in zip(flat, flat[1:]):
            assert e1 + 1 < s2

import pytest
from hypothesis import given, settings, strategies as st

from tweetopics.textprep import (
    BowDoc,
    Vocabulary,
    build_vocabulary,
    encode_bow,
    load_stopwords,
    normalize_tweet,
)


class TestNormalizeTweet:
    def test_url_mention_stopwords_hashtag(self):
        # hand application of the full rule sequence
        assert normalize_tweet("The future of #AI is here! https://t.co/x @user") == [
            "future",
            "#ai",
        ]

    def test_empty_input(self):
        assert normalize_tweet("") == []

    def test_hashtag_casefold_keeps_duplicates(self):
        assert normalize_tweet("#RemoteWork #remotework") == ["#remotework", "#remotework"]

    def test_scheme_urls_dropped(self):
        assert normalize_tweet("see http://example.com/page and t.co/abc now") == []

    def test_short_tokens_dropped_hash_not_counted(self):
        # '#' does not count toward hashtag length: #a has body length 1
        assert normalize_tweet("a I #a #ab xy") == ["#ab", "xy"]

    def test_split_on_non_alphanumeric(self):
        assert normalize_tweet("state-of-the-art co2!") == ["state", "art", "co2"]

    def test_pure_function(self):
        text = "Robots & the #Future of work, 2030 edition!"
        assert normalize_tweet(text) == normalize_tweet(text)

    def test_emoji_dropped(self):
        assert normalize_tweet("robots \U0001F916 rising") == ["robots", "rising"]


class TestVocabulary:
    def test_min_df_filter(self):
        docs = [["a", "b"], ["a", "c"], ["a"]]
        vocab = build_vocabulary(iter(docs), min_df=2, max_df_ratio=1.0)
        assert set(vocab.term_to_id) == {"a"}
        assert vocab.doc_freq["a"] == 3
        assert vocab.total_docs == 3

    def test_max_df_filter_empty_vocab_fatal(self):
        docs = [["a", "b"], ["a", "c"], ["a"]]
        with pytest.raises(ValueError, match="loosen"):
            build_vocabulary(iter(docs), min_df=2, max_df_ratio=0.5)

    def test_deterministic_ids(self):
        docs = [["b", "a"], ["c", "a", "b"], ["a", "c"]]
        v1 = build_vocabulary(iter(docs), min_df=1, max_df_ratio=1.0)
        v2 = build_vocabulary(iter(docs), min_df=1, max_df_ratio=1.0)
        assert v1.term_to_id == v2.term_to_id
        # dense lexicographic ids
        assert v1.term_to_id == {"a": 0, "b": 1, "c": 2}

    def test_json_roundtrip(self, tmp_path):
        docs = [["a", "b"], ["a"]]
        vocab = build_vocabulary(iter(docs), min_df=1, max_df_ratio=1.0)
        path = tmp_path / "vocab.json"
        vocab.save(path)
        loaded = Vocabulary.load(path)
        assert loaded.term_to_id == vocab.term_to_id
        assert loaded.doc_freq == vocab.doc_freq
        assert loaded.total_docs == vocab.total_docs
        assert loaded.build_params == vocab.build_params

    def test_bad_params(self):
        with pytest.raises(ValueError):
            build_vocabulary(iter([["a"]]), min_df=0)
        with pytest.raises(ValueError):
            build_vocabulary(iter([["a"]]), max_df_ratio=0.0)

    @given(
        st.lists(
            st.lists(st.sampled_from("abcdefgh"), min_size=0, max_size=12),
            min_size=1,
            max_size=30,
        ),
        st.integers(min_value=1, max_value=4),
        st.floats(min_value=0.1, max_value=1.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_filter_soundness(self, docs, min_df, max_df_ratio):
        # brute-force recount: every retained term obeys both bounds
        try:
            vocab = build_vocabulary(iter(docs), min_df=min_df, max_df_ratio=max_df_ratio)
        except ValueError:
            return  # empty vocabulary is a legal outcome
        for term in vocab.term_to_id:
            df = sum(term in set(doc) for doc in docs)
            assert vocab.doc_freq[term] == df
            assert min_df <= df <= max_df_ratio * len(docs)


class TestEncodeBow:
    def test_counts_aggregate(self):
        vocab = Vocabulary({"a": 0, "b": 1}, {"a": 2, "b": 1}, 2)
        bow = encode_bow(["a", "b", "a"], vocab, doc_id=7)
        assert bow.counts == {0: 2, 1: 1}
        assert bow.total_tokens == 3
        assert bow.doc_id == 7

    def test_oov_dropped(self):
        vocab = Vocabulary({"a": 0}, {"a": 1}, 1)
        bow = encode_bow(["z"], vocab)
        assert bow.counts == {}
        assert bow.total_tokens == 0

    def test_empty_tokens(self):
        vocab = Vocabulary({"a": 0}, {"a": 1}, 1)
        assert encode_bow([], vocab).counts == {}

    def test_doc_freq_consistency(self):
        # encoding the corpus reproduces the vocabulary's doc frequencies
        docs = [["a", "b", "a"], ["b", "c"], ["a"], ["c", "c", "b"]]
        vocab = build_vocabulary(iter(docs), min_df=1, max_df_ratio=1.0)
        id_to_term = vocab.id_to_term
        recount = {term: 0 for term in vocab.term_to_id}
        for tokens in docs:
            bow = encode_bow(tokens, vocab)
            for term_id in bow.counts:
                recount[id_to_term[term_id]] += 1
        assert recount == vocab.doc_freq


def test_stopword_list_versioned():
    words = load_stopwords("english-v1")
    assert {"the", "of", "is", "here"} <= words
    assert "future" not in words
    with pytest.raises(ValueError, match="unknown stopword list"):
        load_stopwords("nope-v9")

import math
import random

import numpy as np
import pytest

from diacorpus.corpus import PeriodCorpus
from diacorpus.embeddings import (
    EmbeddingSet,
    association,
    build_ppmi,
    collocations,
    cosine,
    count_cooccurrences,
    most_similar,
    read_embeddings,
    read_ppmi,
    similarity,
    svd_embeddings,
    vocabulary_order,
    write_embeddings,
    write_ppmi,
)
from diacorpus.errors import (
    ComputationUndefinedError,
    OutOfVocabularyError,
    ParameterError,
)

from conftest import PERIOD_1930


def synthetic_word(i):
    # letter-only so the alphabetic filter keeps it
    return "w" + chr(ord("a") + i // 26) + chr(ord("a") + i % 26)


def random_leaf(rng, max_types=20, max_tokens=200):
    """A synthetic preprocessed leaf with a random small corpus."""
    n_types = rng.randint(2, max_types)
    words = [synthetic_word(i) for i in range(n_types)]
    docs = {}
    remaining = rng.randint(n_types, max_tokens)
    d = 0
    while remaining > 0:
        length = min(remaining, rng.randint(1, 30))
        docs[f"d{d}"] = " ".join(rng.choice(words) for _ in range(length))
        remaining -= length
        d += 1
    leaf = PeriodCorpus.from_texts(PERIOD_1930, docs)
    assert leaf.vocabulary.entries, "synthetic corpus lost its vocabulary to filtering"
    return leaf


def oracle_dense_counts(leaf, window):
    """Independent dense co-occurrence counting by explicit pair enumeration."""
    order = vocabulary_order(leaf.vocabulary)
    index = {w: i for i, w in enumerate(order)}
    dense = np.zeros((len(order), len(order)))
    for seq in leaf.lemma_sequences:
        for i in range(len(seq)):
            for j in range(len(seq)):
                if i != j and abs(i - j) <= window:
                    if seq[i] in index and seq[j] in index:
                        dense[index[seq[i]], index[seq[j]]] += 1
    return dense


def oracle_dense_ppmi(dense_counts, alpha):
    """Direct dense evaluation of the smoothed positive association formula."""
    grand = dense_counts.sum()
    size = len(dense_counts)
    row_totals = dense_counts.sum(axis=1)
    col_totals = dense_counts.sum(axis=0)
    smoothed = col_totals**alpha
    p_col = smoothed / smoothed.sum()
    out = np.zeros_like(dense_counts, dtype=float)
    for i in range(size):
        for j in range(size):
            if dense_counts[i, j] == 0:
                continue
            p_uv = dense_counts[i, j] / grand
            p_u = row_totals[i] / grand
            value = math.log(p_uv / (p_u * p_col[j]))
            out[i, j] = max(value, 0.0)
    return out


class TestCooccurrence:
    def test_single_pair(self):
        leaf = PeriodCorpus.from_texts(PERIOD_1930, {"d": "aa bb"})
        matrix = count_cooccurrences(leaf, window=2)
        assert matrix.pair_count("aa", "bb") == 1
        assert matrix.pair_count("bb", "aa") == 1
        assert matrix.grand_total == 2

    def test_single_token(self):
        leaf = PeriodCorpus.from_texts(PERIOD_1930, {"d": "aa"})
        matrix = count_cooccurrences(leaf, window=5)
        assert matrix.grand_total == 0

    def test_hand_enumerated_golden(self):
        # tokens a b a b, window 2: unordered in-window pairs are
        # (0,1) ab, (0,2) aa, (1,2) ba, (1,3) bb, (2,3) ab
        leaf = PeriodCorpus.from_texts(PERIOD_1930, {"d": "aa bb aa bb"})
        matrix = count_cooccurrences(leaf, window=2)
        assert matrix.pair_count("aa", "bb") == 3
        assert matrix.pair_count("bb", "aa") == 3
        assert matrix.pair_count("aa", "aa") == 2
        assert matrix.pair_count("bb", "bb") == 2
        assert matrix.grand_total == 10

    def test_symmetry_and_grand_total_on_random_corpora(self):
        rng = random.Random(101)
        nonempty = 0
        for _ in range(10):
            leaf = random_leaf(rng)
            window = rng.randint(1, 4)
            matrix = count_cooccurrences(leaf, window)
            dense = matrix.counts.toarray()
            assert np.array_equal(dense, dense.T)
            assert matrix.grand_total % 2 == 0
            assert np.array_equal(dense, oracle_dense_counts(leaf, window))
            nonempty += matrix.grand_total > 0
        assert nonempty >= 8  # the check must not pass vacuously

    def test_invalid_window(self):
        leaf = PeriodCorpus.from_texts(PERIOD_1930, {"d": "aa bb"})
        with pytest.raises(ParameterError):
            count_cooccurrences(leaf, window=0)


class TestPpmi:
    def test_degenerate_single_type(self):
        leaf = PeriodCorpus.from_texts(PERIOD_1930, {"d": "aa aa aa aa"})
        ppmi = build_ppmi(count_cooccurrences(leaf, window=2))
        assert ppmi.association("aa", "aa") == 0.0

    def test_never_cooccurring_pair_is_zero(self):
        leaf = PeriodCorpus.from_texts(PERIOD_1930, {"d1": "aa bb", "d2": "cc dd"})
        ppmi = build_ppmi(count_cooccurrences(leaf, window=2))
        assert ppmi.association("aa", "cc") == 0.0

    def test_empty_counts_rejected(self):
        leaf = PeriodCorpus.from_texts(PERIOD_1930, {"d": "aa"})
        with pytest.raises(ComputationUndefinedError):
            build_ppmi(count_cooccurrences(leaf, window=2))

    def test_three_type_corpus_matches_dense_oracle(self):
        leaf = PeriodCorpus.from_texts(
            PERIOD_1930, {"d1": "aa bb cc aa", "d2": "bb cc bb aa cc"}
        )
        matrix = count_cooccurrences(leaf, window=2)
        ppmi = build_ppmi(matrix, alpha=0.75)
        expected = oracle_dense_ppmi(matrix.counts.toarray().astype(float), 0.75)
        assert np.allclose(ppmi.values.toarray(), expected, atol=1e-12)

    def test_matches_dense_oracle_on_random_corpora(self):
        rng = random.Random(202)
        checked = 0
        for _ in range(25):
            leaf = random_leaf(rng)
            matrix = count_cooccurrences(leaf, window=rng.randint(1, 3))
            if matrix.grand_total == 0:
                continue
            alpha = rng.choice([0.5, 0.75, 1.0])
            ppmi = build_ppmi(matrix, alpha=alpha)
            expected = oracle_dense_ppmi(matrix.counts.toarray().astype(float), alpha)
            assert np.max(np.abs(ppmi.values.toarray() - expected)) <= 1e-12
            checked += 1
        assert checked >= 20  # the check must not pass vacuously


def _random_sparse_ppmi(rng, size, density=0.3):
    data = np.where(
        rng.random((size, size)) < density, rng.uniform(0.1, 3.0, (size, size)), 0.0
    )
    import scipy.sparse as sp

    index = {f"w{i:02d}": i for i in range(size)}
    from diacorpus.embeddings import PPMIMatrix

    return PPMIMatrix(
        period=PERIOD_1930, vocab_index=index, values=sp.csr_matrix(data), alpha=0.75
    )


class TestSvd:
    def test_scalar_case(self):
        import scipy.sparse as sp

        from diacorpus.embeddings import PPMIMatrix

        ppmi = PPMIMatrix(
            period=PERIOD_1930,
            vocab_index={"aa": 0},
            values=sp.csr_matrix(np.array([[4.0]])),
            alpha=0.75,
        )
        words, context = svd_embeddings(ppmi, dim=1)
        assert abs(abs(float(words.matrix[0, 0])) - 2.0) < 1e-12

    def test_full_rank_reconstruction(self):
        rng = np.random.default_rng(5)
        ppmi = _random_sparse_ppmi(rng, 12)
        words, context = svd_embeddings(ppmi, dim=12)
        dense = ppmi.values.toarray()
        err = np.linalg.norm(words.matrix @ context.T - dense) / np.linalg.norm(dense)
        assert err <= 1e-6

    def test_truncation_error_equals_tail_singular_mass(self):
        leaf = PeriodCorpus.from_texts(
            PERIOD_1930, {"d1": "aa bb cc aa", "d2": "bb cc bb aa cc"}
        )
        ppmi = build_ppmi(count_cooccurrences(leaf, window=2))
        words, context = svd_embeddings(ppmi, dim=2)
        dense = ppmi.values.toarray()
        _, singular, _ = np.linalg.svd(dense)
        expected_err = math.sqrt(float(np.sum(singular[2:] ** 2)))
        actual_err = np.linalg.norm(words.matrix @ context.T - dense)
        assert actual_err == pytest.approx(expected_err, abs=1e-9)

    def test_orthonormal_left_vectors_and_descending_values(self):
        rng = np.random.default_rng(6)
        ppmi = _random_sparse_ppmi(rng, 20)
        words, context = svd_embeddings(ppmi, dim=20)
        norms = np.linalg.norm(words.matrix, axis=0)  # column norms = sqrt(s)
        assert np.all(np.diff(norms) <= 1e-10)
        u = words.matrix / np.where(norms > 0, norms, 1.0)
        gram = u.T @ u
        mask = norms > 1e-12
        assert np.max(np.abs(gram[np.ix_(mask, mask)] - np.eye(mask.sum()))) <= 1e-8

    def test_deterministic(self):
        rng = np.random.default_rng(7)
        ppmi = _random_sparse_ppmi(rng, 15)
        a, _ = svd_embeddings(ppmi, dim=6)
        b, _ = svd_embeddings(ppmi, dim=6)
        assert np.array_equal(a.matrix, b.matrix)

    def test_dim_exceeding_vocab_rejected(self):
        rng = np.random.default_rng(8)
        ppmi = _random_sparse_ppmi(rng, 4)
        with pytest.raises(ParameterError):
            svd_embeddings(ppmi, dim=5)

    def test_sparse_iterative_path_agrees_with_dense(self):
        # vocabularies above the dense cutoff use iterative sparse SVD; it
        # must stay deterministic and match the dense decomposition
        import scipy.sparse as sp

        from diacorpus.embeddings import PPMIMatrix, _DENSE_SVD_LIMIT

        size = _DENSE_SVD_LIMIT + 30
        rng = np.random.default_rng(11)
        rows = rng.integers(0, size, 6000)
        cols = rng.integers(0, size, 6000)
        data = rng.uniform(0.1, 2.0, 6000)
        values = sp.csr_matrix((data, (rows, cols)), shape=(size, size))
        ppmi = PPMIMatrix(
            period=PERIOD_1930,
            vocab_index={f"w{i:04d}": i for i in range(size)},
            values=values,
            alpha=0.75,
        )
        words, context = svd_embeddings(ppmi, dim=6)
        again, _ = svd_embeddings(ppmi, dim=6)
        assert np.array_equal(words.matrix, again.matrix)
        _, dense_singular, _ = np.linalg.svd(values.toarray())
        iterative_singular = np.linalg.norm(words.matrix, axis=0) ** 2
        assert np.allclose(iterative_singular, dense_singular[:6], rtol=1e-8)
        # rank-6 truncation achieves the optimal Frobenius residual
        residual = np.linalg.norm(words.matrix @ context.T - values.toarray())
        optimal = np.sqrt(np.sum(dense_singular[6:] ** 2))
        assert residual == pytest.approx(optimal, rel=1e-9)


class TestQueries:
    @pytest.fixture()
    def toy(self):
        leaf = PeriodCorpus.from_texts(
            PERIOD_1930, {"d1": "aa bb cc aa bb", "d2": "bb cc bb aa cc"}
        )
        ppmi = build_ppmi(count_cooccurrences(leaf, window=2))
        words, _ = svd_embeddings(ppmi, dim=3)
        return ppmi, words

    def test_self_similarity_is_one(self, toy):
        _, words = toy
        assert similarity("aa", "aa", words) == pytest.approx(1.0, abs=1e-12)

    def test_most_similar_excludes_query(self, toy):
        _, words = toy
        ranking = most_similar("aa", 2, words)
        assert all(w != "aa" for w, _ in ranking)
        assert len(ranking) == 2

    def test_association_of_never_cooccurring_pair(self):
        leaf = PeriodCorpus.from_texts(PERIOD_1930, {"d1": "aa bb", "d2": "cc dd"})
        ppmi = build_ppmi(count_cooccurrences(leaf, window=2))
        assert association("aa", "dd", ppmi) == 0.0

    def test_collocations_match_dense_oracle_ranking(self, toy):
        ppmi, _ = toy
        dense = ppmi.values.toarray()
        order = sorted(ppmi.vocab_index, key=ppmi.vocab_index.__getitem__)
        i = ppmi.vocab_index["aa"]
        expected = sorted(
            (
                (order[j], dense[i, j])
                for j in range(len(order))
                if dense[i, j] > 0 and order[j] != "aa"
            ),
            key=lambda kv: (-kv[1], kv[0]),
        )
        actual = collocations("aa", len(order), ppmi)
        assert [w for w, _ in actual] == [w for w, _ in expected]
        for (_, got), (_, want) in zip(actual, expected):
            assert got == pytest.approx(want, abs=1e-12)

    def test_oov_error_names_word_and_period(self, toy):
        _, words = toy
        with pytest.raises(OutOfVocabularyError) as err:
            most_similar("yok", 3, words)
        assert "yok" in str(err.value)
        assert "1930-1939" in str(err.value)

    def test_cosine_invariant_under_orthogonal_rotation(self):
        rng = np.random.default_rng(9)
        matrix = rng.normal(size=(30, 8))
        q, _ = np.linalg.qr(rng.normal(size=(8, 8)))
        rotated = matrix @ q
        for _ in range(20):
            i, j = rng.integers(0, 30, size=2)
            assert cosine(matrix[i], matrix[j]) == pytest.approx(
                cosine(rotated[i], rotated[j]), abs=1e-8
            )


class TestFileFormats:
    def test_embedding_roundtrip_is_lossless(self, tmp_path):
        rng = np.random.default_rng(10)
        index = {f"w{i}": i for i in range(6)}
        original = EmbeddingSet(
            period=PERIOD_1930,
            vocab_index=index,
            matrix=rng.normal(size=(6, 4)),
            dim=4,
            provenance="svd",
        )
        path = tmp_path / "emb.vec"
        write_embeddings(original, path)
        loaded = read_embeddings(path)
        assert np.array_equal(loaded.matrix, original.matrix)
        assert loaded.vocab_index == original.vocab_index
        assert loaded.provenance == "svd"
        write_embeddings(loaded, tmp_path / "emb2.vec")
        assert (tmp_path / "emb.vec").read_bytes() == (tmp_path / "emb2.vec").read_bytes()

    def test_ppmi_roundtrip_is_lossless(self, tmp_path):
        leaf = PeriodCorpus.from_texts(
            PERIOD_1930, {"d1": "aa bb cc aa bb", "d2": "bb cc bb aa cc"}
        )
        ppmi = build_ppmi(count_cooccurrences(leaf, window=2))
        path = tmp_path / "assoc.tsv"
        write_ppmi(ppmi, path)
        loaded = read_ppmi(path, leaf.vocabulary)
        assert np.array_equal(loaded.values.toarray(), ppmi.values.toarray())
        assert loaded.vocab_index == ppmi.vocab_index

from .evaluate import (TopicReport, TopicSummary, coherence, match_topics, report, select_model,
                       top_words, topic_coherence, total_variation)
from .lda import DegenerateDataError, LdaModel, derive_seed, fit
from .preprocess import (CONTENT_POS, ConfigurationError, Document, lemmatize, load_custom_stopwords,
                         load_pos_lexicon, load_stopwords, merge_ngrams, pair_scores, preprocess)

__all__ = [
    "TopicReport", "TopicSummary", "coherence", "match_topics", "report", "select_model",
    "top_words", "topic_coherence", "total_variation",
    "DegenerateDataError", "LdaModel", "derive_seed", "fit",
    "CONTENT_POS", "ConfigurationError", "Document", "lemmatize", "load_custom_stopwords",
    "load_pos_lexicon", "load_stopwords", "merge_ngrams", "pair_scores", "preprocess",
]

"""Prior polarity of words from SentiWordNet senses, and its evaluation."""

from .evaluation import (
    ClassReport, EvalReport, EvalRow, classification_report, classify_formulae,
    classify_word, committee_vote, evaluate_formulae, filter_affective, mae,
    s_over_e, success_rate,
)
from .formulae import (
    FORMULAS, AggregateScore, RandomStream, aggregate_fs, aggregate_mean,
    aggregate_senti, aggregate_w1, aggregate_w2, combine_diff, combine_max,
    prior_polarity, score_rnd, score_swrnd, score_uni,
)
from .gold_alignment import AlignedDataset, AlignedItem, GoldEntry, align, load_gold, read_gold
from .lemmatizer import lemmatize
from .significance import (
    TestResult, approx_randomization, chi_square_success, paired_t_test,
    significance_matrix,
)
from .swn_lexicon import (
    LemmaKey, Lexicon, SenseEntry, SenseList, export_prior_lexicon, lookup,
    parse_swn, read_swn,
)

__version__ = "0.1.0"

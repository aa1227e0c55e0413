"""Braid-group key exchange workbench: Ko-Lee and AAG protocols, and the
adversary tools that break the first by decomposition and show that
conjugacy search alone does not break the second."""

from .braid import (
    BraidContext,
    BraidError,
    NormalForm,
    PermutationBraid,
    Word,
    canonical_bytes,
    commutator,
    conjugate,
    equals,
    free_reduce,
    handle_reduce,
    invert,
    make_word,
    multiply,
    nf_from_bytes,
    nf_to_word,
    random_word,
    to_normal_form,
)
from .subgroups import SubgroupSpec, SubgroupWord, standard_split, subgroup_word_eval
from .protocols import AagPublic, KoLeePublic, SharedKey, run_aag, run_kolee

__version__ = "0.1.0"

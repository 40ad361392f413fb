"""Spiking neural P system simulation and private linear evaluation over ElGamal."""

from .dsl import ParseError, parse_system, render_system
from .elgamal import Ciphertext, GroupParams, KeyPair, decrypt, encrypt, encrypt_with, hom_add, hom_mul, hom_scale, keygen
from .engine import AmbiguousChoice, OverBudget, SpikeTrace, run, run_events, step
from .linfun import LinParams, build_pi_add, eval_linear, linfun_oracle
from .numtheory import gen_group, is_probable_prime, make_rng, mod_inv, mod_pow, rand_below
from .patterns import Atom, Concat, Lambda, Plus, SpikeSet, UnionP, compile_pattern, pattern_matches
from .protocol import ComputeRequest, ComputeResponse, client_finish, client_prepare, server_compute
from .system import FiringRule, ForgettingRule, Neuron, SnpSystem, applicable_rules, validate_system

__version__ = "0.1.0"

"""Toolkit for intuitionistic modal logic over finite birelational frames."""

from .errors import ImlError
from .formula import Atom, Top, Bot, Impl, Or, And, Box, Dia, ParseError, parse, show
from .structures import Frame, FrameClassSpec, Model, build_frame, check_property, parse_spec
from .semantics import extension, sat, true_in_model, valid_in_frame
from .io import load_frame, load_model

__version__ = "0.1.0"

"""Exception hierarchy for solitrend.

Copyright 2026 The solitrend developers

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
or implied. See the License for the specific language governing
permissions and limitations under the License."""


class SolitrendError(Exception):
    """Base class of all errors raised by solitrend."""


class ValidationError(SolitrendError, ValueError):
    """Rejected input (command line exit status 1)."""


class NumericalError(SolitrendError, RuntimeError):
    """A computation that could not be carried out (exit status 2)."""


class UndefinedEntropyError(ValidationError):
    """Informative entropy requested with p_plus <= p_minus."""


class EmptySeriesError(ValidationError):
    pass


class OhlcFormatError(ValidationError):

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = 'line %i: %s' % (line, message)
        super().__init__(message)


class DegenerateScalingError(ValidationError):
    """Continuum scaling with vanishing nonlinearity."""


class ComplexRootsError(ValidationError):

    def __init__(self, discriminant):
        self.discriminant = discriminant
        super().__init__(
            'cubic has complex roots (discriminant %.6e < 0), '
            'no periodic regime' % discriminant)


class StateExitError(NumericalError):
    """Oscillator state left the open probability interval."""


class BlowUpError(NumericalError):

    def __init__(self, step, time, linf):
        self.step, self.time, self.linf = step, time, linf
        super().__init__(
            'blow-up at step %i (t = %.6g): max|u| = %.3e; '
            'reduce dt or increase resolution' % (step, time, linf))


class FissionError(NumericalError):

    def __init__(self, found, expected):
        self.found, self.expected = found, expected
        super().__init__(
            'found %i separated peaks, expected %i; '
            'increase T or the domain length' % (found, expected))


class NoReturnError(NumericalError):
    """Forced soliton did not return within the step budget."""

# Tests for shiftlab

# Tests package for clifford_cyclotomic_tool

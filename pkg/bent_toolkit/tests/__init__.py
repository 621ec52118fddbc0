# Tests package for the toolkit

# Working modules of the toolkit

# Source package for the tight-design rationality toolkit

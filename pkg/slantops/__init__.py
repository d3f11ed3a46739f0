# Slant operator toolkit

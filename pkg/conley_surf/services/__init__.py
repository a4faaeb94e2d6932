"""Operations on surfaces, blocks and Conley indices."""

vars X, Y, Z;
h(X,Y,Z) = 1

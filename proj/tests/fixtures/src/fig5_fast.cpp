int x, y;
scanf("%d %d", &x, &y);
int res = gcd(x, y);
printf("%d\n", res);

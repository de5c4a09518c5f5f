var x = 3;
var y = x + 39, z = "function not really";
